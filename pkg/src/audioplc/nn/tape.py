"""Minimal reverse-mode autodiff over numpy arrays.

Only the operations the recurrent generator and its loss actually use are
implemented: add/sub/mul/div, matrix-vector product, sigmoid, tanh, slicing,
concatenation and mean/sum reductions.  Everything runs in float64.

A forward pass builds an operation graph of ``Tensor`` nodes; ``backward``
walks it once in reverse topological order and accumulates gradients into
every leaf that was created with ``requires_grad=True``.  There is no global
state, so independent forward/backward passes may run concurrently as long
as each pass owns its own tensors.
"""

from __future__ import annotations

from typing import Callable, Sequence, Union

import numpy as np

ArrayLike = Union["Tensor", np.ndarray, float, int]


def _stable_sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` (inverse of numpy broadcasting)."""
    if grad.shape == shape:
        return grad
    grad = np.sum(grad, axis=tuple(range(grad.ndim - len(shape))))
    for axis, n in enumerate(shape):
        if n == 1 and grad.shape[axis] != 1:
            grad = np.sum(grad, axis=axis, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    """Array node on the reverse-mode tape.

    ``value`` is a read-only float64 array.  After ``backward`` has run,
    ``grad`` holds d(loss)/d(value) for every node that required gradients
    (``None`` for leaves the loss does not depend on).
    """

    __slots__ = ("value", "grad", "requires_grad", "_parents", "_vjp")

    # Keep numpy from consuming Tensors elementwise; reflected dunders run.
    __array_ufunc__ = None

    def __init__(
        self,
        value: ArrayLike,
        requires_grad: bool = False,
        parents: tuple = (),
        vjp: Callable | None = None,
    ):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad or any(p.requires_grad for p in parents)
        self._parents = parents
        self._vjp = vjp

    @property
    def shape(self) -> tuple:
        return self.value.shape

    def __len__(self) -> int:
        return len(self.value)

    def __repr__(self) -> str:
        return f"Tensor({self.value!r}, requires_grad={self.requires_grad})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: ArrayLike) -> "Tensor":
        other = lift(other)
        out = Tensor(self.value + other.value, parents=(self, other))
        out._vjp = lambda g: (_unbroadcast(g, self.shape), _unbroadcast(g, other.shape))
        return out

    __radd__ = __add__

    def __sub__(self, other: ArrayLike) -> "Tensor":
        other = lift(other)
        out = Tensor(self.value - other.value, parents=(self, other))
        out._vjp = lambda g: (_unbroadcast(g, self.shape), _unbroadcast(-g, other.shape))
        return out

    def __rsub__(self, other: ArrayLike) -> "Tensor":
        return lift(other) - self

    def __mul__(self, other: ArrayLike) -> "Tensor":
        other = lift(other)
        out = Tensor(self.value * other.value, parents=(self, other))
        out._vjp = lambda g: (
            _unbroadcast(g * other.value, self.shape),
            _unbroadcast(g * self.value, other.shape),
        )
        return out

    __rmul__ = __mul__

    def __truediv__(self, other: ArrayLike) -> "Tensor":
        other = lift(other)
        out = Tensor(self.value / other.value, parents=(self, other))
        out._vjp = lambda g: (
            _unbroadcast(g / other.value, self.shape),
            _unbroadcast(-g * self.value / (other.value * other.value), other.shape),
        )
        return out

    def __rtruediv__(self, other: ArrayLike) -> "Tensor":
        return lift(other) / self

    def __neg__(self) -> "Tensor":
        out = Tensor(-self.value, parents=(self,))
        out._vjp = lambda g: (-g,)
        return out

    def __matmul__(self, other: ArrayLike) -> "Tensor":
        other = lift(other)
        a, b = self.value, other.value
        if a.ndim != 2 or b.ndim != 1:
            raise ValueError(
                f"matmul supports matrix @ vector only, got {a.shape} @ {b.shape}"
            )
        out = Tensor(a @ b, parents=(self, other))
        out._vjp = lambda g: (np.outer(g, b), a.T @ g)
        return out

    def __rmatmul__(self, other: ArrayLike) -> "Tensor":
        return lift(other) @ self

    def __getitem__(self, key) -> "Tensor":
        out = Tensor(self.value[key], parents=(self,))

        def vjp(g):
            full = np.zeros_like(self.value)
            np.add.at(full, key, g)
            return (full,)

        out._vjp = vjp
        return out

    # -- nonlinearities and reductions --------------------------------------

    def sigmoid(self) -> "Tensor":
        s = _stable_sigmoid(self.value)
        out = Tensor(s, parents=(self,))
        out._vjp = lambda g: (g * s * (1.0 - s),)
        return out

    def tanh(self) -> "Tensor":
        t = np.tanh(self.value)
        out = Tensor(t, parents=(self,))
        out._vjp = lambda g: (g * (1.0 - t * t),)
        return out

    def mean(self) -> "Tensor":
        n = self.value.size
        out = Tensor(self.value.mean(), parents=(self,))
        out._vjp = lambda g: (np.full_like(self.value, g / n),)
        return out

    def sum(self) -> "Tensor":
        out = Tensor(self.value.sum(), parents=(self,))
        out._vjp = lambda g: (np.full_like(self.value, g),)
        return out


def lift(x: ArrayLike) -> Tensor:
    """Wrap a constant as a no-gradient Tensor; pass Tensors through."""
    return x if isinstance(x, Tensor) else Tensor(x)


def concatenate(parts: Sequence[ArrayLike]) -> Tensor:
    """Concatenate 1-d tensors, differentiable in every part."""
    parts = [lift(p) for p in parts]
    values = [p.value for p in parts]
    if any(v.ndim != 1 for v in values):
        raise ValueError("concatenate expects 1-d tensors")
    out = Tensor(np.concatenate(values), parents=tuple(parts))
    offsets = np.cumsum([0] + [v.size for v in values])

    def vjp(g):
        return tuple(g[offsets[i]:offsets[i + 1]] for i in range(len(parts)))

    out._vjp = vjp
    return out


def backward(loss: Tensor, seed: float = 1.0) -> None:
    """Accumulate d(loss)/d(leaf) into ``.grad`` of every reachable leaf.

    ``loss`` must be a scalar produced by a recorded forward pass.
    """
    if not isinstance(loss, Tensor):
        raise TypeError("backward expects the Tensor returned by a forward pass")
    if loss.value.ndim != 0:
        raise ValueError(f"loss root must be scalar, got shape {loss.value.shape}")

    # Iterative topological sort; chains grow with sequence length, so no
    # recursion.
    order: list[Tensor] = []
    visited: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited or not node.requires_grad:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            stack.append((p, False))

    loss.grad = np.asarray(seed, dtype=np.float64)
    for node in reversed(order):
        if node._vjp is None or node.grad is None:
            continue
        for parent, g in zip(node._parents, node._vjp(node.grad)):
            if not parent.requires_grad or g is None:
                continue
            if parent.grad is None:
                parent.grad = np.zeros_like(parent.value)
            parent.grad = parent.grad + g


# -- type-generic helpers ----------------------------------------------------
# The layer math below is written once against these; passing plain numpy
# arrays gives a tape-free inference path, passing Tensors records gradients.


def sigmoid(x):
    if isinstance(x, Tensor):
        return x.sigmoid()
    return _stable_sigmoid(np.asarray(x, dtype=np.float64))


def tanh(x):
    if isinstance(x, Tensor):
        return x.tanh()
    return np.tanh(x)


def concat(parts):
    if any(isinstance(p, Tensor) for p in parts):
        return concatenate(parts)
    return np.concatenate(parts)


def mean(x):
    if isinstance(x, Tensor):
        return x.mean()
    return float(np.mean(x))


def total(x):
    if isinstance(x, Tensor):
        return x.sum()
    return float(np.sum(x))
