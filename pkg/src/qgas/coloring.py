"""Graph coloring as a binary polynomial with Gray-coded color indices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .poly import BinaryPolynomial, gray_decode


@dataclass(frozen=True)
class ColoringInstance:
    vertices: int
    edges: tuple[tuple[int, int], ...]
    colors: int

    def __post_init__(self) -> None:
        if self.vertices < 1:
            raise ValueError("need at least one vertex")
        if self.colors < 2 or self.colors & (self.colors - 1):
            raise ValueError(f"color count must be a power of two >= 2, got {self.colors}")
        norm = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            norm.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(set(norm))))

    @property
    def bits_per_vertex(self) -> int:
        return self.colors.bit_length() - 1

    @property
    def num_vars(self) -> int:
        return self.vertices * self.bits_per_vertex

    def vertex_bits(self, v: int) -> list[int]:
        """Variable indices of vertex ``v``'s code word, most-significant first."""
        b = self.bits_per_vertex
        return [v * b + (b - 1 - j) for j in range(b)]


def coloring_polynomial(inst: ColoringInstance) -> BinaryPolynomial:
    """One unit of penalty per edge whose endpoints share a color.

    Gray decoding is a bijection on code words, so two vertices share a
    color exactly when their code words agree bit for bit; the penalty is
    the product over bits of ``1 - u - v + 2uv``.
    """
    n = inst.num_vars
    total = BinaryPolynomial.const(0.0, n)
    for u, v in inst.edges:
        term = BinaryPolynomial.const(1.0, n)
        for bu, bv in zip(inst.vertex_bits(u), inst.vertex_bits(v)):
            xu = BinaryPolynomial.variable(bu, n)
            xv = BinaryPolynomial.variable(bv, n)
            term = term * (1 - xu - xv + 2 * xu * xv)
        total = total + term
    return total


def decode_coloring(inst: ColoringInstance, assignment: Sequence[int]) -> list[int]:
    """Color of each vertex from an assignment of the polynomial's variables."""
    return [gray_decode([assignment[i] for i in inst.vertex_bits(v)]) for v in range(inst.vertices)]


def conflicts(inst: ColoringInstance, colors: Sequence[int]) -> int:
    return sum(int(colors[u] == colors[v]) for u, v in inst.edges)


def backtracking_coloring(inst: ColoringInstance) -> Optional[list[int]]:
    """Proper coloring by plain backtracking, or ``None`` if none exists."""
    adj: list[set[int]] = [set() for _ in range(inst.vertices)]
    for u, v in inst.edges:
        adj[u].add(v)
        adj[v].add(u)
    colors = [-1] * inst.vertices

    def place(v: int) -> bool:
        if v == inst.vertices:
            return True
        for c in range(inst.colors):
            if all(colors[w] != c for w in adj[v]):
                colors[v] = c
                if place(v + 1):
                    return True
        colors[v] = -1
        return False

    return list(colors) if place(0) else None


def parse_graph(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Edge list ``u v`` per line; an optional ``vertices N`` line sets the count."""
    edges: list[tuple[int, int]] = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if parts[0] == "vertices" and len(parts) == 2 and parts[1].isdigit():
            declared = int(parts[1])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"line {lineno}: expected 'u v', got {raw.strip()!r}")
        edges.append((int(parts[0]), int(parts[1])))
    seen = max((max(e) for e in edges), default=-1) + 1
    return (declared if declared is not None else max(seen, 1)), edges
