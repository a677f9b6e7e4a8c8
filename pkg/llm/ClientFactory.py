import os

from errors import ConfigError
from .LLMClient import LLMClient


def make_client(endpoint: str, role: str = None, retries: int = 3) -> LLMClient:
    """
    Build a client from an endpoint string: `mock:<script.jsonl>`, `llama:<model.gguf>`,
    or an HTTP address (`http://host:port/path` or `host:port`).
    """
    if not endpoint:
        raise ConfigError(f"no endpoint configured for the {role or 'generator'} role")
    if endpoint.startswith("mock:"):
        from .MockClient import MockClient
        path = endpoint[len("mock:"):]
        if not os.path.exists(path):
            raise ConfigError(f"mock script not found: {path}")
        return MockClient.from_file(path, role=role)
    if endpoint.startswith("llama:"):
        from .LlamaCppClient import LlamaCppClient
        return LlamaCppClient(endpoint[len("llama:"):])
    from .HttpClient import HttpClient
    return HttpClient(endpoint, retries=retries)
