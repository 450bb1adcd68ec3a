"""Per-check result records and their CSV form."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

CSV_FMT = "%.16e"


def fmt(x):
    """Scientific notation with 17 significant digits."""
    return CSV_FMT % float(x)


@dataclass
class EstimateReport:
    """Items of one inequality check.

    ``lhs`` and ``rhs`` are stored divided by ``exp(log_scale)`` so that
    inequalities between numbers far outside double range stay comparable;
    the true sides are ``lhs * exp(log_scale)`` and ``rhs * exp(log_scale)``.
    """

    check_name: str
    identifiers: list = field(default_factory=list)
    lhs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    rhs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    log_scale: np.ndarray = field(default_factory=lambda: np.zeros(0))
    tol: float = 1e-8
    constants: object = None
    notes: list = field(default_factory=list)

    def __post_init__(self):
        self.lhs = np.asarray(self.lhs, dtype=float).ravel()
        self.rhs = np.asarray(self.rhs, dtype=float).ravel()
        ls = np.asarray(self.log_scale, dtype=float).ravel()
        if ls.size != self.lhs.size:
            ls = np.zeros(self.lhs.size) if ls.size == 0 else np.broadcast_to(ls, self.lhs.shape).copy()
        self.log_scale = ls
        self.identifiers = list(self.identifiers)
        # per-item tolerances survive merging reports built with different tol
        self._tol = np.full(self.lhs.size, float(self.tol))

    @property
    def margin(self):
        return self.rhs - self.lhs

    @property
    def passed(self):
        return self.margin >= -self._tol * np.abs(self.rhs)

    @property
    def ok(self):
        return bool(np.all(self.passed))

    def __len__(self):
        return self.lhs.size

    def failing(self):
        bad = np.flatnonzero(~self.passed)
        return [(self.identifiers[i], self.lhs[i], self.rhs[i]) for i in bad]

    def extend(self, other):
        """Append the items of ``other`` (same check) in order."""
        self.identifiers += other.identifiers
        self.lhs = np.concatenate((self.lhs, other.lhs))
        self.rhs = np.concatenate((self.rhs, other.rhs))
        self.log_scale = np.concatenate((self.log_scale, other.log_scale))
        self._tol = np.concatenate((self._tol, other._tol))
        self.notes += other.notes
        return self

    def to_csv(self, header=True):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(["check_name", "identifier", "lhs", "rhs", "margin", "pass", "log_scale"])
        for i in range(len(self)):
            w.writerow([self.check_name, self.identifiers[i], fmt(self.lhs[i]), fmt(self.rhs[i]),
                        fmt(self.margin[i]), int(self.passed[i]), fmt(self.log_scale[i])])
        return buf.getvalue()


def merge(name, reports):
    out = EstimateReport(name)
    for r in reports:
        out.extend(r)
    return out
