import hashlib
import math
from typing import Any

import libbencode

def to_bencodable(value: Any) -> Any:
    # Bencode knows only integers, byte strings, lists and dictionaries.
    match value:
        case bool():
            return int(value)
        case int():
            return value
        case float():
            return repr(value).encode("utf-8")
        case str():
            return value.encode("utf-8")
        case bytes():
            return value
        case None:
            return b"null"
        case list() | tuple():
            return [to_bencodable(item) for item in value]
        case dict():
            return {
                str(key).encode("utf-8"): to_bencodable(value[key])
                for key in sorted(value, key=str)
                }
        case _:
            raise TypeError(f"Unsupported config value: {value!r} ({type(value).__name__})")

def generate_config_hash(config: dict[str, Any]) -> str:
    return hashlib.sha256(libbencode.encode(to_bencodable(config))).hexdigest()

def parse_float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ValueError(f"Malformed list of numbers: {text!r}") from None

def format_number(value: float) -> str:
    if not math.isfinite(value):
        return str(value)

    return f"{value:.6g}"
