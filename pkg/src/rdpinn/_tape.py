"""Minimal reverse-mode autodiff over numpy arrays.

Covers exactly the operations the deep baseline network needs: affine maps,
elementwise arithmetic, logistic activations, and mean-square reductions.
Gradients are accumulated by walking the tape backwards; broadcasting in
forward ops is undone by summing gradients back to the operand shape.
"""
from __future__ import annotations

import numpy as np


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum grad down to `shape` (inverse of numpy broadcasting)."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


class Var:
    """A node in the computation graph."""

    __slots__ = ("value", "grad", "_parents", "_backward")

    def __init__(self, value, parents=(), backward=None):
        self.value = np.asarray(value, dtype=float)
        self.grad = None
        self._parents = parents
        self._backward = backward

    @property
    def shape(self):
        return self.value.shape

    def __add__(self, other):
        other = as_var(other)

        def back(g):
            return (_unbroadcast(g, self.shape), _unbroadcast(g, other.shape))

        return Var(self.value + other.value, (self, other), back)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_var(other)

        def back(g):
            return (_unbroadcast(g, self.shape), _unbroadcast(-g, other.shape))

        return Var(self.value - other.value, (self, other), back)

    def __rsub__(self, other):
        return as_var(other) - self

    def __mul__(self, other):
        other = as_var(other)

        def back(g):
            return (_unbroadcast(g * other.value, self.shape),
                    _unbroadcast(g * self.value, other.shape))

        return Var(self.value * other.value, (self, other), back)

    __rmul__ = __mul__

    def __neg__(self):
        return Var(-self.value, (self,), lambda g: (-g,))

    def __matmul__(self, other):
        other = as_var(other)
        a, b = self.value, other.value

        def back(g):
            if a.ndim == 2 and b.ndim == 2:
                return (g @ b.T, a.T @ g)
            if a.ndim == 2 and b.ndim == 1:
                return (np.outer(g, b), a.T @ g)
            if a.ndim == 1 and b.ndim == 2:
                return (b @ g, np.outer(a, g))
            return (g * b, g * a)

        return Var(a @ b, (self, other), back)


def as_var(x) -> Var:
    return x if isinstance(x, Var) else Var(x)


def sigmoid(x: Var) -> Var:
    s = 0.5 * (1.0 + np.tanh(0.5 * x.value))
    sp = s * (1.0 - s)
    return Var(s, (x,), lambda g: (g * sp,))


def square(x: Var) -> Var:
    return Var(x.value * x.value, (x,), lambda g: (2.0 * g * x.value,))


def mean(x: Var) -> Var:
    n = x.value.size

    def back(g):
        return (np.full(x.shape, float(g) / n),)

    return Var(x.value.mean(), (x,), back)


def power(x: Var, k: float) -> Var:
    """x**k for strictly positive x."""
    v = x.value**k
    return Var(v, (x,), lambda g: (g * k * x.value ** (k - 1.0),))


def backward(root: Var) -> None:
    """Accumulate d(root)/d(node) into .grad over the whole graph."""
    order: list[Var] = []
    seen: set[int] = set()
    stack = [(root, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            stack.append((p, False))
    for node in order:
        node.grad = np.zeros_like(node.value)
    root.grad = np.ones_like(root.value)
    for node in reversed(order):
        if node._backward is None:
            continue
        gs = node._backward(node.grad)
        for p, g in zip(node._parents, gs):
            p.grad = p.grad + g
