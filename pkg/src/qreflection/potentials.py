"""One-dimensional potentials understood by the scattering solvers.

Every potential is a sequence of segments ``(z_a, z_b, kind, par, xk, cf)``
evaluated by the compiled kernels; the first segment starts at ``z = 0`` and
the last one extends to infinity.  Energies are in neV, lengths in nm.
"""
import numpy as np
from numba import njit

from ._kernels import KIND_CONST, KIND_POWER, potential_eval
from .errors import DomainError

_EMPTY1 = np.zeros(1)
_EMPTY2 = np.zeros((4, 1))


@njit(cache=True)
def _eval_many(kind, par, xk, cf, z, out):
    for i in range(z.size):
        v, dv, d2v = potential_eval(kind, par, xk, cf, z[i])
        out[0, i] = v
        out[1, i] = dv
        out[2, i] = d2v


class Potential:
    """Base class; subclasses provide :meth:`segments`."""

    name = "potential"

    def segments(self):
        raise NotImplementedError

    @property
    def breakpoints(self):
        """Positions of discontinuities (segment boundaries)."""
        return tuple(s[1] for s in self.segments()[:-1])

    @property
    def far_tail(self):
        """``(c, p)`` with ``V ~ -c z**-p`` at large z, or None if V vanishes there."""
        return None

    @property
    def near_tail(self):
        """``(c, p)`` with ``V ~ -c z**-p`` as z -> 0, or None."""
        return None

    def derivatives(self, z):
        """V, dV/dz and d2V/dz2 at ``z`` (arrays of the shape of ``z``)."""
        z = np.asarray(z, dtype=float)
        flat = z.ravel()
        if np.any(flat <= 0):
            raise DomainError("z must be positive")
        out = np.empty((3, flat.size))
        for za, zb, kind, par, xk, cf in self.segments():
            sel = (flat > za) & (flat <= zb) if za > 0 else flat <= zb
            if np.any(sel):
                buf = np.empty((3, int(sel.sum())))
                _eval_many(kind, par, xk, cf, flat[sel], buf)
                out[:, sel] = buf
        return tuple(o.reshape(z.shape) for o in out)

    def __call__(self, z):
        return self.derivatives(z)[0]


class PowerLawPotential(Potential):
    """``V(z) = -c / z**p`` on the whole half line."""

    def __init__(self, c, p=4.0, name=None):
        if c <= 0 or p <= 2:
            raise DomainError("need c > 0 and p > 2")
        self.c = float(c)
        self.p = float(p)
        self.name = name or f"power-law p={p:g}"
        self._par = np.array([self.c, self.p])

    def segments(self):
        return [(0.0, np.inf, KIND_POWER, self._par, _EMPTY1, _EMPTY2)]

    @property
    def far_tail(self):
        return self.c, self.p

    @property
    def near_tail(self):
        return self.c, self.p


class StepPotential(Potential):
    """Piecewise-constant potential.

    ``values[i]`` applies on ``(edges[i-1], edges[i]]`` with ``edges[-1] = 0``
    implied on the left and infinity on the right.  The last value must be 0.
    """

    def __init__(self, edges, values, name="steps"):
        edges = tuple(float(e) for e in edges)
        values = tuple(float(v) for v in values)
        if len(values) != len(edges) + 1:
            raise DomainError("need one more value than edges")
        if any(b <= a for a, b in zip(edges, edges[1:])) or (edges and edges[0] <= 0):
            raise DomainError("edges must be positive and increasing")
        if values[-1] != 0.0:
            raise DomainError("the outermost region must be free (V = 0)")
        self.edges = edges
        self.values = values
        self.name = name

    def segments(self):
        bounds = (0.0,) + self.edges + (np.inf,)
        return [(bounds[i], bounds[i + 1], KIND_CONST, np.array([v]), _EMPTY1, _EMPTY2)
                for i, v in enumerate(self.values)]


class ZeroPotential(StepPotential):
    def __init__(self):
        super().__init__((), (0.0,), name="free")


def square_well(depth, width):
    """``V = -depth`` for ``z < width``, free beyond."""
    if depth <= 0 or width <= 0:
        raise DomainError("depth and width must be positive")
    return StepPotential((width,), (-depth, 0.0), name=f"well({depth:g}, {width:g})")
