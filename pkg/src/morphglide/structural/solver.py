"""Quasi-static inflation solve and extraction of the morphed section."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from ..errors import ContractError, GeometryError, InvertedElementError, NonConvergenceError
from ..geometry import AirfoilProfile
from .fem import FEModel
from .materials import HyperelasticMaterial
from .mesh import chain_edges

log = logging.getLogger(__name__)

__all__ = [
    "INFLATED_CHAMBER",
    "SolverSettings",
    "DeformationState",
    "solve_inflation",
    "deformed_profile",
    "trailing_edge_deflection",
    "residual_tolerance",
]

# Pressurising the upper chamber lengthens the upper side of the strain-limited
# section and pushes the trailing edge down: positive, lift-increasing camber.
INFLATED_CHAMBER = "chamber_upper"


@dataclass(frozen=True)
class SolverSettings:
    n_load_steps: int = 10
    max_newton: int = 40
    tol_factor: float = 1e-8
    max_bisections: int = 5
    min_line_search: float = 1.0 / 1024


@dataclass
class DeformationState:
    displacements: np.ndarray
    applied_pressure_pa: float = 0.0
    converged: bool = True
    newton_iterations: int = 0
    chamber: str = INFLATED_CHAMBER
    residual_norm: float = 0.0
    history: list = field(default_factory=list)

    @classmethod
    def zero(cls, mesh, chamber=INFLATED_CHAMBER):
        return cls(np.zeros((mesh.n_nodes, 2)), 0.0, True, 0, chamber)


def residual_tolerance(model, settings):
    """Absolute residual tolerance: tol_factor x C1 x chord (N/m)."""
    c1 = max(
        (m.c1_pa for m in model.materials.values() if isinstance(m, HyperelasticMaterial)),
        default=max(m.shear_modulus_pa for m in model.materials.values()),
    )
    chord = float(np.ptp(model.mesh.nodes[:, 0]))
    return settings.tol_factor * c1 * chord


def _newton(model, u, pressure, chamber, tol, settings):
    """Newton iteration with a backtracking (Armijo) line search on the total potential energy."""
    free = model.free
    r, K = model.residual_tangent(u, pressure, chamber)
    rn = np.linalg.norm(r[free])
    energy = model.total_energy(u, pressure, chamber)
    for it in range(settings.max_newton + 1):
        if rn <= tol:
            return u, it, rn
        if it == settings.max_newton:
            break
        du = np.zeros_like(u)
        du[free] = spla.spsolve(K[free][:, free].tocsc(), -r[free])
        slope = float(r @ du)
        step = 1.0
        while True:
            trial = u + step * du
            try:
                e_trial = model.total_energy(trial, pressure, chamber)
                if slope >= 0 or e_trial <= energy + 1e-4 * step * slope or step <= settings.min_line_search:
                    break
            except InvertedElementError:
                if step <= settings.min_line_search:
                    raise
            step *= 0.5
        u, energy = trial, e_trial
        r, K = model.residual_tangent(u, pressure, chamber)
        rn = np.linalg.norm(r[free])
    raise NonConvergenceError(f"Newton did not converge at p = {pressure:.1f} Pa, residual {rn:.3e} N/m", residual=rn)


def solve_inflation(
    mesh,
    target_pressure_pa,
    n_load_steps=None,
    chamber=INFLATED_CHAMBER,
    materials=None,
    settings=None,
    model=None,
    initial=None,
):
    """Ramp the chamber pressure linearly to ``target_pressure_pa`` and solve each increment.

    A failed increment (inverted element or Newton stall) is bisected, at most
    ``settings.max_bisections`` times in a row.
    """
    settings = settings or SolverSettings()
    n_steps = settings.n_load_steps if n_load_steps is None else int(n_load_steps)
    if target_pressure_pa < 0:
        raise ContractError("target pressure must be non-negative")
    if n_steps < 1:
        raise ContractError("need at least one load step")
    model = model or FEModel(mesh, materials)
    tol = residual_tolerance(model, settings)
    if target_pressure_pa == 0:
        return DeformationState(np.zeros((mesh.n_nodes, 2)), 0.0, True, 0, chamber)

    u = np.zeros(model.n_dofs) if initial is None else model.from_nodal(initial.displacements)
    p0 = 0.0 if initial is None else initial.applied_pressure_pa
    dp_nominal = (target_pressure_pa - p0) / n_steps
    p = p0
    total_its = 0
    history = []
    depth = 0
    while p < target_pressure_pa * (1 - 1e-14):
        dp = min(dp_nominal / 2**depth, target_pressure_pa - p)
        try:
            u_new, its, rn = _newton(model, u, p + dp, chamber, tol, settings)
        except (InvertedElementError, NonConvergenceError) as exc:
            depth += 1
            if depth > settings.max_bisections:
                raise type(exc)(f"{exc} (after {settings.max_bisections} load-step bisections)") from exc
            log.debug("bisecting load step at p = %.1f Pa: %s", p, exc)
            continue
        u, p = u_new, p + dp
        total_its += its
        history.append((p, its, rn))
        depth = max(depth - 1, 0)
    return DeformationState(model.nodal(u), float(p), True, total_its, chamber, float(rn), history)


def _outline_nodes(mesh):
    loop = chain_edges(mesh.boundary_sets["outer_surface"])
    pts = mesh.nodes[loop]
    area = 0.5 * np.sum(pts[:, 0] * np.roll(pts[:, 1], -1) - np.roll(pts[:, 0], -1) * pts[:, 1])
    if area < 0:
        loop = loop[::-1]
    te = int(np.argmax(mesh.nodes[loop, 0]))
    return np.roll(loop, -te)


def deformed_profile(mesh, state, name=None):
    """Closed section outline from the displaced outer-surface nodes."""
    if not state.converged:
        raise ContractError("deformed_profile needs a converged state")
    loop = _outline_nodes(mesh)
    pts = mesh.nodes[loop] + np.asarray(state.displacements)[loop]
    pts = np.vstack([pts, pts[:1]])
    chord = float(np.ptp(mesh.nodes[loop, 0]))
    label = name if name is not None else f"deformed@{state.applied_pressure_pa / 1e3:.2f}kPa"
    try:
        return AirfoilProfile(pts, chord, label)
    except GeometryError as exc:
        raise GeometryError(f"degenerate deformed boundary: {exc}") from exc


def trailing_edge_deflection(mesh, state):
    """Vertical displacement of the trailing-edge node (negative = downward)."""
    te = int(np.argmax(mesh.nodes[:, 0]))
    return float(np.asarray(state.displacements)[te, 1])
