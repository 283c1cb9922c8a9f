"""Binary model checkpoints.

Layout (all little-endian):

    magic  b"PLCM"
    u16    format version (currently 1)
    u32    metadata length, then that many bytes of UTF-8 JSON
    repeated until end of file:
        u32  name length, name bytes (UTF-8)
        u32  rank, then rank x u32 dims
        float32 data, C order

Tensors are stored at 32-bit precision regardless of the training width;
save -> load -> save reproduces the file byte-for-byte because float32
values are exactly representable in float64.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .nn.layers import DenseParams, LstmParams, StackedCellParams, named_params

MAGIC = b"PLCM"
VERSION = 1


def save_checkpoint(
    path: str | Path,
    params: StackedCellParams,
    frame_len: int,
    sample_rate: int,
) -> None:
    meta = {
        "frame_len": frame_len,
        "sample_rate": sample_rate,
        "lstm_units": [l.hidden for l in params.lstm],
        "dense_units": [d.weight.shape[0] for d in params.dense],
        "dense_activations": [d.activation for d in params.dense],
    }
    blob = json.dumps(meta, sort_keys=True).encode("utf-8")
    chunks = [MAGIC, struct.pack("<H", VERSION), struct.pack("<I", len(blob)), blob]
    for name, arr in named_params(params):
        data = np.ascontiguousarray(arr, dtype="<f4")
        name_b = name.encode("utf-8")
        chunks.append(struct.pack("<I", len(name_b)))
        chunks.append(name_b)
        chunks.append(struct.pack("<I", data.ndim))
        chunks.append(struct.pack(f"<{data.ndim}I", *data.shape))
        chunks.append(data.tobytes())
    Path(path).write_bytes(b"".join(chunks))


def load_checkpoint(path: str | Path) -> tuple[StackedCellParams, dict]:
    """Return (params, metadata); parameters come back as float64 arrays."""
    buf = Path(path).read_bytes()
    if buf[:4] != MAGIC:
        raise ValueError(f"{path}: not a model checkpoint (bad magic)")
    (version,) = struct.unpack_from("<H", buf, 4)
    if version != VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {version}")
    (meta_len,) = struct.unpack_from("<I", buf, 6)
    off = 10
    meta = json.loads(buf[off:off + meta_len].decode("utf-8"))
    off += meta_len

    tensors: dict[str, np.ndarray] = {}
    while off < len(buf):
        (name_len,) = struct.unpack_from("<I", buf, off)
        off += 4
        name = buf[off:off + name_len].decode("utf-8")
        off += name_len
        (rank,) = struct.unpack_from("<I", buf, off)
        off += 4
        dims = struct.unpack_from(f"<{rank}I", buf, off)
        off += 4 * rank
        count = int(np.prod(dims)) if rank else 1
        data = np.frombuffer(buf, dtype="<f4", count=count, offset=off)
        off += 4 * count
        tensors[name] = data.reshape(dims).astype(np.float64)
    return _rebuild(tensors, meta), meta


def _rebuild(tensors: dict[str, np.ndarray], meta: dict) -> StackedCellParams:
    lstm = []
    for i in range(len(meta["lstm_units"])):
        lstm.append(
            LstmParams(
                w_in=tensors[f"lstm{i}.w_in"],
                w_rec=tensors[f"lstm{i}.w_rec"],
                bias=tensors[f"lstm{i}.bias"],
            )
        )
    dense = []
    for j, act in enumerate(meta["dense_activations"]):
        dense.append(
            DenseParams(
                weight=tensors[f"dense{j}.weight"],
                bias=tensors[f"dense{j}.bias"],
                activation=act,
            )
        )
    params = StackedCellParams(lstm=lstm, dense=dense)
    params.validate()
    return params
