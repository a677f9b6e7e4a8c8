import hashlib
import json
import os
import re
import tempfile
from typing import Iterable, Iterator, List


def derive_seed(*parts) -> int:
    """
    Derive a stable 63-bit seed from a run seed and any number of labels.

    All randomness of a run flows from one seed through this function, so that a
    resumed or re-ordered run draws exactly the same numbers per problem.
    """
    digest = hashlib.sha256("\x1f".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def natural_key(text: str) -> List:
    """Sort key that orders embedded integers numerically ("job2" < "job10")."""
    return [int(part) if part.isdigit() else part for part in re.split(r"(\d+)", text)]


def strip_ws(text: str) -> str:
    """Remove every whitespace character; used for modulo-whitespace comparisons."""
    return "".join(text.split())


def read_jsonl(path: str) -> Iterator[dict]:
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as e:
                raise ValueError(f"{path}:{lineno}: invalid JSON line ({e})") from e


def dump_json_line(row: dict) -> str:
    return json.dumps(row, ensure_ascii=False, sort_keys=True)


def write_jsonl(rows: Iterable[dict], path: str) -> int:
    """Write rows as JSONL (sorted keys, unicode kept). Returns the number of rows."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(dump_json_line(row) + "\n")
            count += 1
    return count


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def atomic_write_json(path: str, data) -> None:
    atomic_write_text(path, json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n")


def map_bounded(fn, items, parallelism: int = 1, desc: str = None, show_progress: bool = True) -> list:
    """
    Apply `fn` to every item with at most `parallelism` calls in flight. Results keep the
    input order; an exception raised by `fn` is returned in place of its result.
    """
    from concurrent.futures import ThreadPoolExecutor, as_completed
    from tqdm import tqdm

    items = list(items)
    results = [None] * len(items)

    def _safe(i):
        try:
            return i, fn(items[i])
        except Exception as e:
            return i, e

    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        futures = [pool.submit(_safe, i) for i in range(len(items))]
        for future in tqdm(as_completed(futures), total=len(futures), desc=desc, disable=not show_progress):
            i, value = future.result()
            results[i] = value
    return results
