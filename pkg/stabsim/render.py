"""Minimal output renderer - one event in, one block of text out."""

import csv
import io
import json
from enum import Enum

GRAY = "\033[90m"
GREEN = "\033[32m"
RED = "\033[31m"
CYAN = "\033[36m"
YELLOW = "\033[33m"
R = "\033[0m"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _json(payload) -> str:
    return json.dumps(payload, indent=2)


def _text(event: dict) -> str:
    payload = event.get("payload")
    match event["type"]:
        case "record":
            lines = []
            for e in payload["entries"]:
                tag = f"{GRAY}deterministic{R}" if e["deterministic"] else f"{CYAN}random{R}"
                lines.append(f"m q{e['qubit']} (gate {e['gate']}) -> {e['outcome']} {tag}")
            for k in payload.get("fallback_chunks", []):
                lines.append(f"{YELLOW}! chunk {k} ran sequentially{R}")
            return "\n".join(lines) if lines else f"{GRAY}no measurements{R}"
        case "histogram":
            lines = [f"{GRAY}shots {payload['shots']}{R}"]
            for bitstring, count in payload["joint"].items():
                lines.append(f"{bitstring or '-'} {count}")
            return "\n".join(lines)
        case "stats" | "report":
            lines = []
            for key, value in payload.items():
                if key == "passed":
                    symbol = f"{GREEN}●{R}" if value else f"{RED}✗{R}"
                    lines.append(f"{symbol} passed: {value}")
                elif key == "failures":
                    lines.extend(f"{RED}✗ {msg}{R}" for msg in value)
                else:
                    lines.append(f"{key}: {value}")
            return "\n".join(lines)
        case "bench":
            header = payload["columns"]
            widths = [max([len(str(h))] + [len(str(r[i])) for r in payload["rows"]]) for i, h in enumerate(header)]
            lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths, strict=True))]
            for row in payload["rows"]:
                lines.append("  ".join(str(v).ljust(w) for v, w in zip(row, widths, strict=True)))
            return "\n".join(lines)
        case "dump":
            return payload
        case "warning":
            return f"{YELLOW}{payload}{R}"
        case "error":
            return f"{RED}✗ {payload}{R}"
    raise ValueError(f"unknown event type {event['type']!r}")


def _table(event: dict) -> tuple[list[str], list[list]]:
    payload = event["payload"]
    match event["type"]:
        case "record":
            rows = [[e["gate"], e["qubit"], e["outcome"], int(e["deterministic"])] for e in payload["entries"]]
            return ["gate", "qubit", "outcome", "deterministic"], rows
        case "histogram":
            return ["bitstring", "count"], [[k, v] for k, v in payload["joint"].items()]
        case "stats" | "report":
            return list(payload), [[payload[k] for k in payload]]
        case "bench":
            return payload["columns"], payload["rows"]
    raise ValueError(f"event type {event['type']!r} has no table form")


def render(event: dict, fmt: OutputFormat | str = OutputFormat.TEXT) -> str:
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.JSON:
        if event["type"] == "bench":
            payload = event["payload"]
            return _json([dict(zip(payload["columns"], row, strict=True)) for row in payload["rows"]])
        return _json(event["payload"])
    if fmt is OutputFormat.CSV:
        return _csv(*_table(event))
    return _text(event)
