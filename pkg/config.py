from dotenv import load_dotenv
import os

# Load the .env file
load_dotenv()

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
RUN_DIR = os.getenv("RUN_DIR", "runs/latest")

# Verifier backends
VERIFIER_CMD = os.getenv("VERIFIER_CMD")
VERIFIER_ADDR = os.getenv("VERIFIER_ADDR")
VERIFIER_HEADER = os.getenv("VERIFIER_HEADER")
TIMEOUT_S = float(os.getenv("TIMEOUT_S", 60))
MEMORY_LIMIT_BYTES = int(os.getenv("MEMORY_LIMIT_BYTES", 8 * 1024 ** 3))
TOY_BOUND = int(os.getenv("TOY_BOUND", 100))
PARALLELISM = int(os.getenv("PARALLELISM", 4))

# Generator endpoints
PROPOSER_ADDR = os.getenv("PROPOSER_ADDR")
PROVER_ADDR = os.getenv("PROVER_ADDR")
TEMPERATURE = float(os.getenv("TEMPERATURE", 0.9))
MAX_TOKENS = int(os.getenv("MAX_TOKENS", 4096))

ALPHA = float(os.getenv("ALPHA", 0.8))

LEAN_HEADER = os.getenv(
    "LEAN_HEADER",
    "import Mathlib\nimport Aesop\n\nset_option maxHeartbeats 400000\n\n"
    "open BigOperators Real Nat Topology Rat\n",
)
