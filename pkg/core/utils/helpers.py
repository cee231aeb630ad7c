"""
Helper utilities for common operations
"""
import hashlib
import json
import uuid
from pathlib import Path
from typing import Any, Optional, Union


def generate_run_id(prefix: str = "RUN") -> str:
    """
    Generate a unique run ID for the ledger

    Args:
        prefix: Prefix for the ID

    Returns:
        Unique run ID
    """
    return f"{prefix}-{uuid.uuid4().hex[:12]}"


def calculate_hash(data: Any) -> str:
    """
    Calculate SHA256 hash of data

    Args:
        data: Data to hash (will be JSON serialized)

    Returns:
        Hex digest of hash
    """
    json_str = json.dumps(data, sort_keys=True, default=str)
    return hashlib.sha256(json_str.encode()).hexdigest()


def write_output(text: str, out: Optional[Union[str, Path]] = None) -> Optional[Path]:
    """
    Write command output to a file, or return None so the caller prints it

    Args:
        text: Rendered output
        out: Destination path; parent directories are created

    Returns:
        The written path, or None when no path was given
    """
    if not out:
        return None
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def format_ratio(numerator: int, denominator: int) -> str:
    if denominator == 0:
        return "0/0"
    return f"{numerator}/{denominator} ({100.0 * numerator / denominator:.1f}%)"
