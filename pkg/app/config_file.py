import json
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import ValidationError

from app.schema import ConfigFile
from core.errors import InputError
from core.model import OrderConfig


def _describe(err: ValidationError) -> str:
    parts = []
    for e in err.errors():
        loc = ".".join(str(p) for p in e.get("loc", ())) or "config"
        msg = e.get("msg", "invalid value")
        if msg.startswith("Value error, "):
            msg = msg[len("Value error, "):]
        parts.append(f"{loc}: {msg}")
    return "; ".join(parts)


def load_config_data(data: Any) -> ConfigFile:
    try:
        return ConfigFile.model_validate(data)
    except ValidationError as e:
        raise InputError(f"schema error: {_describe(e)}") from e


def parse_config_text(text: str) -> OrderConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    return load_config_data(data).to_config()


def parse_config(path: Union[str, Path]) -> OrderConfig:
    p = Path(path)
    if not p.exists():
        raise InputError(f"config file not found: {p}")
    with p.open() as f:
        return parse_config_text(f.read())


def dump_config(config: OrderConfig) -> Dict[str, Any]:
    return ConfigFile.from_config(config).model_dump(mode="json")


def write_config(config: OrderConfig, path: Union[str, Path]) -> None:
    with Path(path).open("w") as f:
        json.dump(dump_config(config), f, indent=2)
        f.write("\n")
