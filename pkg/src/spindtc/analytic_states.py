"""Closed-form milestone states of the special HO-DTC phase (lambda = pi,
g = pi/2 family), used as fidelity oracles for the evolved dynamics.

Each milestone is a superposition of at most four products of extremal
coherent states, sum over (satellite sign, central sign) of
c * prod_i |sign_s>^sat_axis (x) |sign_c * s>^cen_axis. The coefficient
tables below are exact (entries in {0, +-1, +-i}); early times (t <= 3)
additionally depend on n_sat mod 4 and 2s mod 4, which the narrative
parity-case classification glosses over. Coefficients are fixed under this
package's coherent-state phase conventions and are global-phase normalized
(first nonzero entry 1).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .hilbert import SystemShape, PureState, product_state, x_polarized_state, fidelity
from .spin_algebra import coherent_axis_state
from .floquet import DriveParams, precompute, evolve

PARITY_CASES = ("odd_int", "even_half", "odd_half", "even_int")


@dataclass(frozen=True)
class MilestoneSpec:
    parity_case: str
    time_index: int


def parity_case_of(shape: SystemShape) -> str:
    odd = shape.n_sat % 2 == 1
    integer = shape.two_s % 2 == 0
    if odd and integer:
        return "odd_int"
    if odd:
        return "odd_half"
    if integer:
        return "even_int"
    return "even_half"


_I = 1j

# (sat_axis, cen_axis, coefficients ordered (+,+), (+,-), (-,+), (-,-));
# a dict value means lookup by (n_sat % 4, two_s % 4)
_MILESTONES = {
    "even_int": {
        1: ("y", "y", [1, 1, 1, -1]),
        2: ("x", "x", [1, -1, -1, -1]),
        3: ("y", "y", [0, 0, 0, 1]),
        4: ("x", "x", [1, 0, 0, 0]),
    },
    "odd_int": {
        3: ("y", "x", {(3, 2): [1, 1, -_I, _I], (1, 2): [1, 1, _I, -_I],
                       (3, 0): [1, -1, _I, _I], (1, 0): [1, -1, -_I, -_I]}),
        6: ("x", "x", [0, 0, 0, 1]),
        12: ("x", "x", [1, 0, 0, 0]),
    },
    "even_half": {
        3: ("x", "y", {(2, 1): [1, _I, 1, -_I], (2, 3): [1, -_I, 1, _I],
                       (0, 1): [1, -_I, -1, -_I], (0, 3): [1, _I, -1, _I]}),
        6: ("x", "x", [0, 0, 0, 1]),
        12: ("x", "x", [1, 0, 0, 0]),
    },
    "odd_half": {
        1: ("z", "z", {(3, 1): [1, -1, 1, 1], (3, 3): [1, 1, 1, -1],
                       (1, 1): [1, -1, -1, -1], (1, 3): [1, 1, -1, 1]}),
        2: ("y", "y", {(3, 1): [1, 1, -1, 1], (3, 3): [1, 1, 1, -1],
                       (1, 1): [1, -1, -1, -1], (1, 3): [1, -1, 1, 1]}),
        3: ("x", "x", {(3, 1): [1, -_I, _I, 1], (3, 3): [1, _I, _I, -1],
                       (1, 1): [1, -_I, -_I, -1], (1, 3): [1, _I, -_I, 1]}),
        4: ("z", "z", [1, -1, -1, 1]),   # product of two GHZ factors
        5: ("y", "y", [1, 0, 0, _I]),
        6: ("x", "x", [1, 0, 0, -_I]),   # joint GHZ state (quarter period)
        12: ("x", "x", [0, 0, 0, 1]),    # reversed polarization (half period)
        24: ("x", "x", [1, 0, 0, 0]),    # full revival
    },
}


def supported_time_indices(parity_case: str) -> tuple[int, ...]:
    try:
        return tuple(sorted(_MILESTONES[parity_case]))
    except KeyError:
        raise ShapeError(f"unknown parity case {parity_case!r}") from None


def milestone_state(shape: SystemShape, spec: MilestoneSpec) -> PureState:
    """Construct the normalized milestone superposition for the given shape."""
    actual = parity_case_of(shape)
    if spec.parity_case != actual:
        raise ShapeError(
            f"shape {shape} is parity case {actual}, spec says {spec.parity_case}")
    try:
        sat_axis, cen_axis, coeffs = _MILESTONES[spec.parity_case][spec.time_index]
    except KeyError:
        raise ShapeError(
            f"no milestone at t={spec.time_index}T for case {spec.parity_case}; "
            f"supported: {supported_time_indices(spec.parity_case)}") from None
    if isinstance(coeffs, dict):
        coeffs = coeffs[(shape.n_sat % 4, shape.two_s % 4)]
    amps = np.zeros(shape.dim, dtype=complex)
    for c, (sat_sign, cen_sign) in zip(coeffs, (("+", "+"), ("+", "-"),
                                                ("-", "+"), ("-", "-"))):
        if c == 0:
            continue
        term = product_state(shape,
                             [coherent_axis_state(1, sat_axis, sat_sign)] * shape.n_sat,
                             coherent_axis_state(shape.two_s, cen_axis, cen_sign))
        amps += c * term.amplitudes
    amps /= np.linalg.norm(amps)
    return PureState(shape, amps)


def milestone_fidelity(shape: SystemShape, params: DriveParams,
                       spec: MilestoneSpec) -> float:
    """Evolve the x-polarized state spec.time_index periods and compare."""
    target = milestone_state(shape, spec)
    state = x_polarized_state(shape)
    tables = precompute(shape, params)
    evolve(state, tables, spec.time_index)
    return fidelity(state, target)
