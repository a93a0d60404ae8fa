import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

logger = logging.getLogger(__name__)

SQRT5 = math.sqrt(5)

# Cube roots of unity available as eigenvalues at the two fixed branch points
CUBE_ROOTS: tuple[complex, ...] = tuple(cmath.exp(2j * math.pi * k / 3) for k in range(3))


@dataclass(frozen=True)
class BranchMatrix:
    """
    The 4x4 centre-centre block of the 2222 connection family at parameter eta
    """

    eta: complex
    alpha: complex
    matrix: npt.NDArray[np.complex128]

    @property
    def trace_defect(self) -> complex:
        """
        Tr(U U^T) - 2
        """

        return complex(np.trace(self.matrix @ self.matrix.T)) - 2

    @property
    def unitarity_residual(self) -> float:
        deviation = self.matrix @ self.matrix.conj().T - np.eye(4)
        return float(np.linalg.norm(deviation))


def branch_alpha(eta: complex) -> complex:
    return (SQRT5 * eta - 1) / (SQRT5 - eta)


def branch_matrix(eta: complex) -> BranchMatrix:
    if abs(abs(eta) - 1) > 1e-12:
        raise ValueError(f"eta must lie on the unit circle, |eta| = {abs(eta)}")

    alpha = branch_alpha(eta)
    s = SQRT5
    matrix = np.array(
        [
            [-1, s, s, s],
            [s, -s * alpha, eta * alpha, s * eta],
            [s, 1, s * eta, -s * eta],
            [s, s * alpha, -s * alpha, 1],
        ],
        dtype=np.complex128,
    ) / 4

    return BranchMatrix(eta=eta, alpha=alpha, matrix=matrix)


def allowed_trace_values() -> set[complex]:
    """
    omega_A + omega_B over the eigenvalue pairs allowed at the fixed points: (1, 1) and (omega, omega-bar)
    """

    omega = CUBE_ROOTS[1]
    return {CUBE_ROOTS[0] + CUBE_ROOTS[0], omega + omega.conjugate()}


@dataclass(frozen=True)
class TracePoint:
    theta: float
    eta: complex
    trace_defect: complex


def _imaginary_defect(theta: float) -> float:
    return branch_matrix(cmath.exp(1j * theta)).trace_defect.imag


def real_trace_points(samples: int = 4096, iterations: int = 80) -> list[TracePoint]:
    """
    Points of the circle where Tr(U U^T) - 2 is real: sign changes of the
    imaginary part on a grid, refined by bisection. The grid is offset by half
    a step and closed around the circle, so eta = 1 and eta = -1 fall inside
    an interval rather than on an endpoint.
    """

    step = 2 * math.pi / samples
    thetas = [-math.pi + (k + 0.5) * step for k in range(samples)]
    thetas.append(thetas[0] + 2 * math.pi)
    values = [_imaginary_defect(theta) for theta in thetas]

    roots: list[float] = []
    for left, right, f_left, f_right in zip(thetas, thetas[1:], values, values[1:]):
        if f_left == 0:
            roots.append(float(left))
            continue

        if f_left * f_right > 0:
            continue

        lower, upper = float(left), float(right)
        f_lower = f_left
        for _ in range(iterations):
            middle = (lower + upper) / 2
            f_middle = _imaginary_defect(middle)
            if f_lower * f_middle <= 0:
                upper = middle
            else:
                lower, f_lower = middle, f_middle

        roots.append((lower + upper) / 2)

    unique: list[float] = []
    for theta in sorted(roots):
        wrapped = math.remainder(theta, 2 * math.pi)
        if all(abs(math.remainder(wrapped - other, 2 * math.pi)) > 1e-9 for other in unique):
            unique.append(wrapped)

    points = []
    for theta in unique:
        eta = cmath.exp(1j * theta)
        points.append(TracePoint(theta, eta, branch_matrix(eta).trace_defect))

    return points


@dataclass(frozen=True)
class TraceTarget:
    target: complex
    attained: bool
    eta: complex | None
    closest_value: complex
    distance: float

    def to_json(self) -> dict[str, object]:
        return {
            "target": [self.target.real, self.target.imag],
            "attained": self.attained,
            "eta": None if self.eta is None else [self.eta.real, self.eta.imag],
            "closest_value": [self.closest_value.real, self.closest_value.imag],
            "distance": self.distance,
        }


def locate_trace_value(target: complex, tolerance: float = 1e-9) -> TraceTarget:
    """
    Searches the real locus of Tr(U U^T) - 2 for the target value
    """

    points = real_trace_points()
    closest = min(points, key=lambda point: abs(point.trace_defect - target))
    distance = abs(closest.trace_defect - target)
    attained = distance < tolerance

    if not attained:
        logger.info(f"Trace value {target} not attained, closest {closest.trace_defect}")

    return TraceTarget(
        target=target,
        attained=attained,
        eta=closest.eta if attained else None,
        closest_value=closest.trace_defect,
        distance=distance,
    )


def locate_allowed_values(tolerance: float = 1e-9) -> list[TraceTarget]:
    return [
        locate_trace_value(value, tolerance)
        for value in sorted(allowed_trace_values(), key=lambda z: -z.real)
    ]
