"""Torus lattice geometry, spin configurations, energy bookkeeping, snapshots.

Spins live on an N x N square lattice with periodic boundary conditions.
The Hamiltonian sums the nearest-neighbor interaction over *ordered* pairs
(each unordered bond counted twice), so the single-flip energy difference is

    delta(sigma, i) = 4 * sigma(i) * sum_nbr(sigma, i) + 2 * h * sigma(i),

which is never zero for field strength h in (0, 1).
"""

from __future__ import annotations

import numpy as np

Site = tuple[int, int]


def torus_distance(a: Site, b: Site, n: int) -> int:
    """Manhattan distance on the torus of side n."""
    dr = abs(b[0] - a[0]) % n
    dc = abs(b[1] - a[1]) % n
    return min(dr, n - dr) + min(dc, n - dc)


def set_distance(w1, w2, n: int) -> int:
    """Minimum torus distance over the product of two nonempty site sets."""
    if not w1 or not w2:
        raise ValueError("set_distance requires nonempty site sets")
    return min(torus_distance(a, b, n) for a in w1 for b in w2)


class Lattice:
    """Immutable lattice descriptor: side length and external field strength."""

    __slots__ = ("n", "h", "_nbr_flat", "_nbr_array")

    def __init__(self, n: int, h: float = 0.5):
        if n < 4:
            raise ValueError(f"side length must be >= 4, got {n}")
        if not (0.0 < h < 1.0):
            raise ValueError(f"field strength must lie in (0, 1), got {h}")
        self.n = int(n)
        self.h = float(h)
        self._nbr_flat = None
        self._nbr_array = None

    @property
    def num_sites(self) -> int:
        return self.n * self.n

    def flat(self, site: Site) -> int:
        return (site[0] % self.n) * self.n + (site[1] % self.n)

    def site(self, idx: int) -> Site:
        return divmod(idx, self.n)

    @property
    def neighbors_flat(self):
        """Flat-index neighbor table as a list of 4-tuples (hot-loop friendly)."""
        if self._nbr_flat is None:
            n = self.n
            tbl = []
            for r in range(n):
                up, dn = ((r - 1) % n) * n, ((r + 1) % n) * n
                row = r * n
                for c in range(n):
                    tbl.append((up + c, dn + c, row + (c - 1) % n, row + (c + 1) % n))
            self._nbr_flat = tbl
        return self._nbr_flat

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.n == other.n and self.h == other.h

    def __hash__(self):
        return hash((self.n, self.h))

    def __repr__(self):
        return f"Lattice(n={self.n}, h={self.h})"


class SpinConfiguration:
    """A +/-1 spin field on a torus lattice, with a cached plus count.

    Treat instances as values: operations that change spins return new
    objects. The underlying numpy array is kept read-only.
    """

    __slots__ = ("lattice", "spins", "plus_count")

    def __init__(self, lattice: Lattice, spins: np.ndarray):
        spins = np.asarray(spins, dtype=np.int8)
        if spins.shape != (lattice.n, lattice.n):
            raise ValueError("spin array shape does not match lattice")
        spins = spins.copy() if spins.flags.writeable else spins
        spins.flags.writeable = False
        self.lattice = lattice
        self.spins = spins
        self.plus_count = int(np.count_nonzero(spins > 0))

    @classmethod
    def filled(cls, lattice: Lattice, value: int) -> "SpinConfiguration":
        if value not in (-1, 1):
            raise ValueError("fill value must be -1 or +1")
        return cls(lattice, np.full((lattice.n, lattice.n), value, dtype=np.int8))

    @classmethod
    def all_minus(cls, lattice: Lattice) -> "SpinConfiguration":
        return cls.filled(lattice, -1)

    @classmethod
    def all_plus(cls, lattice: Lattice) -> "SpinConfiguration":
        return cls.filled(lattice, 1)

    def is_all_plus(self) -> bool:
        return self.plus_count == self.lattice.num_sites

    def is_all_minus(self) -> bool:
        return self.plus_count == 0

    def spin(self, site: Site) -> int:
        n = self.lattice.n
        return int(self.spins[site[0] % n, site[1] % n])

    def flipped(self, site: Site) -> "SpinConfiguration":
        """Return the configuration with the spin at `site` negated."""
        n = self.lattice.n
        out = self.spins.copy()
        r, c = site[0] % n, site[1] % n
        out[r, c] = -out[r, c]
        return SpinConfiguration(self.lattice, out)

    def with_plus(self, sites) -> "SpinConfiguration":
        """Return a copy with every listed site set to +1."""
        n = self.lattice.n
        out = self.spins.copy()
        for r, c in sites:
            out[r % n, c % n] = 1
        return SpinConfiguration(self.lattice, out)

    def __eq__(self, other):
        return (
            isinstance(other, SpinConfiguration)
            and self.lattice == other.lattice
            and self.spins.tobytes() == other.spins.tobytes()
        )

    def __hash__(self):
        return hash((self.lattice.n, self.spins.tobytes()))

    def __repr__(self):
        return f"SpinConfiguration(n={self.lattice.n}, plus={self.plus_count})"


def column_stripe_sites(n: int, col: int, width: int):
    """Sites of a vertical stripe (full columns col .. col+width-1, mod n)."""
    return [(r, (col + k) % n) for k in range(width) for r in range(n)]


def rectangle_sites(n: int, row: int, col: int, height: int, width: int):
    """Sites of a height x width rectangle anchored at (row, col), mod n."""
    return [((row + dr) % n, (col + dc) % n) for dr in range(height) for dc in range(width)]


def hamiltonian(sigma: SpinConfiguration) -> float:
    """Total energy with ordered-pair interaction counting."""
    s = sigma.spins.astype(np.int64)
    pair_sum = (
        (s * np.roll(s, 1, axis=0)).sum()
        + (s * np.roll(s, -1, axis=0)).sum()
        + (s * np.roll(s, 1, axis=1)).sum()
        + (s * np.roll(s, -1, axis=1)).sum()
    )
    return float(-pair_sum - sigma.lattice.h * s.sum())


def neighbor_sum(sigma: SpinConfiguration, site: Site) -> int:
    n = sigma.lattice.n
    r, c = site[0] % n, site[1] % n
    sp = sigma.spins
    return int(sp[(r - 1) % n, c]) + int(sp[(r + 1) % n, c]) + int(sp[r, (c - 1) % n]) + int(sp[r, (c + 1) % n])


def energy_delta(sigma: SpinConfiguration, site: Site) -> float:
    """H(sigma with site flipped) - H(sigma), via the local form."""
    s = sigma.spin(site)
    return 4.0 * s * neighbor_sum(sigma, site) + 2.0 * sigma.lattice.h * s


def flip(sigma: SpinConfiguration, site: Site) -> SpinConfiguration:
    return sigma.flipped(site)


def write_pgm(sigma: SpinConfiguration, path) -> None:
    """Write a plain-text PGM (P2) snapshot: 0 = minus, 255 = plus, row-major."""
    n = sigma.lattice.n
    vals = np.where(sigma.spins > 0, 255, 0)
    lines = [f"P2", f"{n} {n}", "255"]
    lines.extend(" ".join(str(v) for v in row) for row in vals)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_pgm(path, h: float = 0.5) -> SpinConfiguration:
    """Read a snapshot written by :func:`write_pgm`."""
    with open(path) as fh:
        tokens = []
        for line in fh:
            line = line.split("#", 1)[0]
            tokens.extend(line.split())
    if tokens[0] != "P2":
        raise ValueError("not a plain-text PGM (P2) file")
    w, ht, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if w != ht:
        raise ValueError("snapshot is not square")
    pix = np.array(tokens[4:], dtype=np.int64).reshape(ht, w)
    spins = np.where(pix * 2 > maxval, 1, -1).astype(np.int8)
    return SpinConfiguration(Lattice(w, h), spins)
