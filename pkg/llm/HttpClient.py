import logging
import time
from typing import List

import requests

from errors import EndpointUnavailable
from .LLMClient import LLMClient

logger = logging.getLogger(__name__)


class HttpClient(LLMClient):
    """
    JSON-over-HTTP completion endpoint.

    Request body `{prompt, temperature, max_tokens, n, seed}`, response `{choices: [{text}, ...]}`.
    Connection errors, 5xx replies and timeouts are retried with exponential backoff.
    """

    def __init__(self, url: str, retries: int = 3, backoff_s: float = 1.0, timeout_s: float = 600.0,
                 session: requests.Session = None):
        if "://" not in url:
            url = f"http://{url}"
        self.url = url
        self.retries = retries
        self.backoff_s = backoff_s
        self.timeout_s = timeout_s
        self._session = session or requests.Session()

    def __call__(self, prompt: str, **kwargs) -> str:
        return self.generate(prompt, n=1, **kwargs)[0]

    def generate(self, prompt: str, n: int = 1, seed: int = 0, **kwargs) -> List[str]:
        payload = {
            "prompt": prompt,
            "temperature": kwargs.get("temperature", 0.9),
            "max_tokens": kwargs.get("max_tokens", 4096),
            "n": n,
            "seed": seed,
        }
        data = self._post(payload)
        choices = data.get("choices") if isinstance(data, dict) else None
        if not isinstance(choices, list):
            raise EndpointUnavailable(f"{self.url}: reply has no 'choices' list")
        texts = [c.get("text", "") if isinstance(c, dict) else str(c) for c in choices]
        if len(texts) < n:
            logger.warning("%s returned %d of %d samples", self.url, len(texts), n)
        return texts[:n]

    def _post(self, payload: dict) -> dict:
        last = None
        for attempt in range(self.retries + 1):
            try:
                resp = self._session.post(self.url, json=payload, timeout=self.timeout_s)
                if resp.status_code >= 500:
                    raise requests.HTTPError(f"server error {resp.status_code}", response=resp)
                resp.raise_for_status()
                return resp.json()
            except (requests.ConnectionError, requests.Timeout, requests.HTTPError, ValueError) as e:
                last = e
                status = getattr(getattr(e, "response", None), "status_code", None)
                if status is not None and status < 500:
                    break
                if attempt < self.retries:
                    delay = self.backoff_s * (2 ** attempt)
                    logger.warning("%s failed (%s), retrying in %.1fs", self.url, e, delay)
                    time.sleep(delay)
        raise EndpointUnavailable(f"{self.url}: {last}")
