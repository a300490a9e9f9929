"""Atomic file writes: temp file in the target directory, then rename."""

import os
import tempfile

from .errors import IoFailure


def atomic_write_bytes(path, blob: bytes) -> None:
    """Write ``blob`` to ``path`` so readers never observe a torn file."""
    directory = os.path.dirname(os.path.abspath(path))
    tmp_path = None
    try:
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".pxfes-tmp-")
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp_path, path)
        tmp_path = None
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    finally:
        if tmp_path is not None:
            try:
                os.unlink(tmp_path)
            except OSError:
                pass
