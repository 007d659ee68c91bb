"""Second-order harmonic averaging check of the effective model.

The rotating-frame reduction used by the model module rests on three derived
coefficients: the drive-induced level shift Omega^2/(4 omega_L), the
pair-creation coupling 3*G*g/(8 omega_L), and the inversion-coupled field
displacement Omega*g/(2 omega_L).  This module re-derives them numerically,
with no rotating-wave shortcuts, on a Fock-truncated single-mode copy of the
lab Hamiltonian:

    H = w_k a^dag a + w_0 S_z + Omega (S+ + S-) cos(w_L t)
        + G S_z cos(w_L t) + i g (a^dag - a)(S+ + S-)

Hamiltonians are kept as sums of terms with an integer harmonic n meaning a
time dependence e^{i n w_L t}.  Rotating by H0 = w_L (a^dag a + S_z) shifts
matrix elements between harmonics; the oscillating remainder H'' feeds the
second-order average -i H'' * Int[H''] with Int[e^{i n w t}] = e^{i n w t} /
(i n w), Hermitized.  Agreement of the extracted coefficients across mode
truncations N = 2, 3, 4 shows only single-photon processes contribute.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import ID, SM, SP, SZ, dagger
from .model import EffectiveModel, PhysicalParams

__all__ = [
    "HarmonicTerm",
    "HarmonicSum",
    "CoefficientCheck",
    "HeffReport",
    "build_lab_hamiltonian",
    "rotate_frame",
    "second_order_average",
    "compare_to_target",
    "verify_derivation",
]


@dataclass(frozen=True)
class HarmonicTerm:
    """amplitude * op * e^{i harmonic w_L t} on the atom (x) mode space."""

    op: np.ndarray
    amplitude: complex
    harmonic: int

    def __post_init__(self):
        m = np.array(self.op, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "op", m)

    @property
    def matrix(self) -> np.ndarray:
        return self.amplitude * self.op


@dataclass(frozen=True)
class HarmonicSum:
    """A Hamiltonian as a list of harmonics; dims = (2, N+1)."""

    terms: tuple
    omegaL: float
    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        dim = self.dims[0] * self.dims[1]
        for t in self.terms:
            if t.op.shape != (dim, dim):
                raise ValueError(
                    f"term matrix {t.op.shape} does not match dims {self.dims}"
                )

    def collected(self) -> dict:
        """Summed matrix per harmonic, keys sorted ascending."""
        acc: dict = {}
        key = lambda t: (t.harmonic, t.op.tobytes())  # noqa: E731 - stable order
        for t in sorted(self.terms, key=key):
            acc.setdefault(t.harmonic, []).append(t.matrix)
        return {n: sum(ms) for n, ms in sorted(acc.items())}

    def static_part(self) -> "HarmonicSum":
        return HarmonicSum(
            tuple(t for t in self.terms if t.harmonic == 0), self.omegaL, self.dims
        )

    def oscillating_part(self) -> "HarmonicSum":
        return HarmonicSum(
            tuple(t for t in self.terms if t.harmonic != 0), self.omegaL, self.dims
        )

    def hermiticity_defect(self) -> float:
        """max_n || M_n - M_{-n}^dag ||_max; zero for a Hermitian Hamiltonian."""
        coll = self.collected()
        dim = self.dims[0] * self.dims[1]
        zero = np.zeros((dim, dim), dtype=complex)
        defect = 0.0
        for n, m in coll.items():
            partner = coll.get(-n, zero)
            defect = max(defect, float(np.max(np.abs(m - dagger(partner)))))
        return defect


def _mode_ops(n_trunc: int):
    """Truncated annihilation operator and number operator, (N+1)x(N+1)."""
    a = np.diag(np.sqrt(np.arange(1.0, n_trunc + 1)), k=1).astype(complex)
    return a, dagger(a) @ a


def _atom(op: np.ndarray, n_trunc: int) -> np.ndarray:
    return np.kron(op, np.eye(n_trunc + 1, dtype=complex))


def build_lab_hamiltonian(
    params: PhysicalParams, n_trunc: int, mode_freq: float, coupling: float
) -> HarmonicSum:
    """Single-mode lab Hamiltonian with the cosine drive split into e^{+-i w_L t}.

    Kronecker ordering is atom (x) mode.  n_trunc must be >= 2 so that the
    second-order products have room for two excitations.
    """
    if n_trunc < 2:
        raise ValueError(f"mode truncation must be >= 2, got {n_trunc}")
    a, nhat = _mode_ops(n_trunc)
    eye_m = np.eye(n_trunc + 1, dtype=complex)
    sx = SP + SM
    terms = [
        HarmonicTerm(np.kron(ID, nhat), mode_freq, 0),
        HarmonicTerm(_atom(SZ, n_trunc), params.omega0, 0),
        # drive on the transition dipole, cos(w_L t) = (e^{iwt} + e^{-iwt})/2
        HarmonicTerm(_atom(sx, n_trunc), 0.5 * params.rabi, +1),
        HarmonicTerm(_atom(sx, n_trunc), 0.5 * params.rabi, -1),
        # drive on the permanent-dipole asymmetry
        HarmonicTerm(_atom(SZ, n_trunc), 0.5 * params.g_asym, +1),
        HarmonicTerm(_atom(SZ, n_trunc), 0.5 * params.g_asym, -1),
        # full (non-rotating-wave) atom-field coupling i g (a^dag - a)(S+ + S-)
        HarmonicTerm(np.kron(sx, dagger(a) - a), 1j * coupling, 0),
    ]
    return HarmonicSum(tuple(terms), params.omegaL, (2, n_trunc + 1))


def rotate_frame(h: HarmonicSum) -> HarmonicSum:
    """Interaction picture of H0 = w_L (a^dag a + S_z).

    H0 is diagonal with integer-spaced spectrum, so conjugation by
    e^{i H0 t} moves the matrix element (r, c) of any operator up by
    k_r - k_c harmonics, where k is the excitation number n + s_z.
    H0 itself is subtracted before rotating.
    """
    n_trunc = h.dims[1] - 1
    _, nhat = _mode_ops(n_trunc)
    excitation = np.kron(ID, nhat) + _atom(SZ, n_trunc)
    k = np.real(np.diag(excitation))
    shift = np.rint(k[:, None] - k[None, :]).astype(int)

    work = list(h.terms) + [
        HarmonicTerm(np.kron(ID, nhat), -h.omegaL, 0),
        HarmonicTerm(_atom(SZ, n_trunc), -h.omegaL, 0),
    ]
    out = []
    for t in work:
        m = t.matrix
        for delta in np.unique(shift):
            block = np.where(shift == delta, m, 0.0)
            if np.any(block != 0.0):
                out.append(HarmonicTerm(block, 1.0, t.harmonic + int(delta)))
    return HarmonicSum(tuple(out), h.omegaL, h.dims)


def second_order_average(
    h_osc: HarmonicSum, keep_max_harmonic: int = 1, return_discarded: bool = False
):
    """-i H'' Int[H''] dt with the oscillatory antiderivative, Hermitized.

    Every pairwise product term_a * Int[term_b] is formed; products whose
    total harmonic exceeds keep_max_harmonic in magnitude are split off into
    the discarded sum (returned on request so nothing is silently lost).
    The antiderivative constant is zero -- a nonzero choice would introduce
    secular growth, which is why static input terms are rejected.
    """
    if any(t.harmonic == 0 for t in h_osc.terms):
        raise ValueError("static input term: second-order average would be secular")
    kept = []
    discarded = []
    for ta in h_osc.terms:
        for tb in h_osc.terms:
            # -i * A_a e^{i na w t} * A_b e^{i nb w t} / (i nb w)
            amp = -ta.amplitude * tb.amplitude / (tb.harmonic * h_osc.omegaL)
            term = HarmonicTerm(ta.op @ tb.op, amp, ta.harmonic + tb.harmonic)
            (kept if abs(term.harmonic) <= keep_max_harmonic else discarded).append(
                term
            )

    def hermitized(terms):
        sym = []
        for t in terms:
            sym.append(HarmonicTerm(t.op, 0.5 * t.amplitude, t.harmonic))
            sym.append(
                HarmonicTerm(dagger(t.op), 0.5 * np.conj(t.amplitude), -t.harmonic)
            )
        return HarmonicSum(tuple(sym), h_osc.omegaL, h_osc.dims)

    if return_discarded:
        return hermitized(kept), hermitized(discarded)
    return hermitized(kept)


@dataclass(frozen=True)
class CoefficientCheck:
    """One extracted coefficient against its closed-form target."""

    name: str
    measured: complex
    target: complex
    deviation: float
    note: str = ""


@dataclass(frozen=True)
class HeffReport:
    checks: tuple

    @property
    def max_deviation(self) -> float:
        return max(c.deviation for c in self.checks)

    def all_within(self, tol: float) -> bool:
        return all(c.deviation <= tol for c in self.checks)


def _project(matrix: np.ndarray, pattern: np.ndarray) -> complex:
    """Hilbert-Schmidt coefficient of `pattern` inside `matrix`."""
    return complex(
        np.trace(dagger(pattern) @ matrix) / np.trace(dagger(pattern) @ pattern)
    )


def compare_to_target(
    derived: HarmonicSum, model: EffectiveModel, coupling: float
) -> HeffReport:
    """Extract the three averaged coefficients and compare to closed forms.

    Patterns and expected values (the pair and displacement terms carry the
    -i phase of the averaging product):
      * S_z (x) 1       static      -> Omega^2 / (4 w_L)
      * a^dag S+        harmonic +1 -> -i * 3 G g / (8 w_L)
      * (a - a^dag) S_z static      -> -i * Omega g / (2 w_L)
    """
    n_trunc = derived.dims[1] - 1
    a, _ = _mode_ops(n_trunc)
    dim = derived.dims[0] * derived.dims[1]
    zero = np.zeros((dim, dim), dtype=complex)
    collected = derived.collected()
    static = collected.get(0, zero)
    first = collected.get(+1, zero)

    omega, g_asym, w_l = model.omega_rabi, model.g_asym, model.omegaL
    cases = (
        (
            "bloch_siegert",
            static,
            _atom(SZ, n_trunc),
            omega * omega / (4.0 * w_l),
        ),
        (
            "pair_creation",
            first,
            np.kron(SP, dagger(a)),
            -1j * 3.0 * g_asym * coupling / (8.0 * w_l),
        ),
        (
            "mode_displacement",
            static,
            np.kron(SZ, a - dagger(a)),
            -1j * omega * coupling / (2.0 * w_l),
        ),
    )
    checks = []
    for name, matrix, pattern, target in cases:
        measured = _project(matrix, pattern)
        if target == 0:
            deviation = 0.0 if measured == 0 else float("inf")
            note = "" if measured == 0 else "expected exactly zero"
        else:
            deviation = abs(measured - target) / abs(target)
            note = ""
        if measured == 0 and target != 0:
            note = "operator pattern missing from the averaged Hamiltonian"
        checks.append(CoefficientCheck(name, measured, complex(target), deviation, note))
    return HeffReport(tuple(checks))


def _averaged(params: PhysicalParams, n_trunc: int, mode_freq: float, coupling: float):
    lab = build_lab_hamiltonian(params, n_trunc, mode_freq, coupling)
    return second_order_average(rotate_frame(lab).oscillating_part())


def verify_derivation(
    params: PhysicalParams,
    model: EffectiveModel,
    n_trunc: int = 3,
    mode_freq: float | None = None,
    coupling: float = 1e9,
) -> HeffReport:
    """Run the averaging pipeline and check the three coefficients.

    The pair-creation and mode-displacement coefficients are read off the
    full averaged Hamiltonian (their operator patterns are orthogonal to
    every other second-order product).  The level-shift coefficient is read
    off a drive-only run: with the field coupling on, the average also
    contains the photon-number-dependent shift g^2/(2 w_L) *
    (a^dag a S+S- - a a^dag S-S+) -- a Lamb-type term outside the effective
    model, whose S_z component would otherwise pollute the comparison.
    """
    if mode_freq is None:
        mode_freq = model.pair_freq if model.pair_freq > 0 else params.omega0
    full = _averaged(params, n_trunc, mode_freq, coupling)
    drive_only = _averaged(params, n_trunc, mode_freq, 0.0)
    from_full = compare_to_target(full, model, coupling)
    from_drive = compare_to_target(drive_only, model, coupling)
    by_name = {c.name: c for c in from_full.checks}
    by_name["bloch_siegert"] = next(
        c for c in from_drive.checks if c.name == "bloch_siegert"
    )
    return HeffReport(
        tuple(by_name[n] for n in ("bloch_siegert", "pair_creation", "mode_displacement"))
    )
