"""Tiny plain-text ``key = value`` config reader used by scene specs and runs.

Format: one ``key = value`` pair per line, ``#`` starts a comment, blank
lines ignored.  Values stay strings; the consuming schema coerces types.
"""

from .errors import InvalidConfigError


def parse_config_text(text, source="<config>"):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise InvalidConfigError(f"{source}:{lineno}: empty key")
        if key in values:
            raise InvalidConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def read_config(path):
    with open(path) as f:
        return parse_config_text(f.read(), source=str(path))


def parse_bool(s, key):
    lowered = s.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise InvalidConfigError(f"{key}: expected a boolean, got {s!r}")


def parse_floats(s):
    return tuple(float(part) for part in s.replace(",", " ").split())


def parse_channel_map(s, key):
    """Parse ``'4:3.0, 7:1.5'`` into {4: 3.0, 7: 1.5}."""
    result = {}
    s = s.strip()
    if not s or s.lower() == "none":
        return result
    for part in s.replace(",", " ").split():
        if ":" not in part:
            raise InvalidConfigError(f"{key}: expected 'channel:offset', got {part!r}")
        ch, off = part.split(":", 1)
        result[int(ch)] = float(off)
    return result
