"""Shared record of acceptance outcomes, printed at the end of a pytest run."""
RESULTS: dict = {}


def record(k: int, ok: bool, text: str) -> bool:
    RESULTS[k] = (bool(ok), text)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}")
    return ok
