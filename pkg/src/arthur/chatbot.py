"""Fallback chatbot clients for questions the agent cannot answer itself."""

from __future__ import annotations

import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Protocol

from .errors import ChatbotError

DEFAULT_TIMEOUT = 3.0
CANNED_REPLY = "I am not sure, tell me more."


class ChatbotClient(Protocol):
    def reply(self, text: str) -> str: ...


@dataclass(frozen=True)
class CannedChatbotClient:
    """Offline stub: always answers with the same line."""

    text: str = CANNED_REPLY

    def reply(self, text: str) -> str:
        return self.text


class HttpChatbotClient:
    """POSTs the utterance as plain text and returns the response body."""

    def __init__(self, url: str, timeout: float = DEFAULT_TIMEOUT) -> None:
        self.url = url
        self.timeout = timeout

    def reply(self, text: str) -> str:
        request = urllib.request.Request(
            self.url,
            data=text.encode("utf-8"),
            headers={"Content-Type": "text/plain; charset=utf-8"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                return response.read().decode("utf-8").strip()
        except (urllib.error.URLError, OSError, UnicodeDecodeError) as exc:
            raise ChatbotError(f"fallback chatbot at {self.url} failed: {exc}") from exc


def chatbot_from_config(
    url: str | None, timeout: float = DEFAULT_TIMEOUT
) -> ChatbotClient:
    """HTTP client when a URL is configured, otherwise the offline stub."""
    if url:
        return HttpChatbotClient(url, timeout=timeout)
    return CannedChatbotClient()
