"""Total-Lagrangian finite-element assembly for plane-strain triangles.

Forces are per metre of span. The chamber pressure is a follower load: it acts
along the normal of the deformed chamber wall. Because each chamber is a closed
loop the load derives from the potential ``-p * area(chamber)`` and its
stiffness is symmetric.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import GeometryError, InvertedElementError
from .materials import ALUMINIUM, ECOFLEX_00_50, PLA
from .mesh import ALUMINIUM_INSERT, PLA_LAYER, SILICONE

__all__ = ["DEFAULT_MATERIALS", "FEModel", "assemble"]

DEFAULT_MATERIALS = {SILICONE: ECOFLEX_00_50, PLA_LAYER: PLA, ALUMINIUM_INSERT: ALUMINIUM}

_ROT = np.array([[0.0, 1.0], [-1.0, 0.0]])  # maps an edge tangent to its right-hand normal


def _triangle_rule(order):
    if order == 1:
        pts = np.array([[1 / 3, 1 / 3]])
        w = np.array([0.5])
    else:
        pts = np.array([[1 / 6, 1 / 6], [2 / 3, 1 / 6], [1 / 6, 2 / 3]])
        w = np.full(3, 1 / 6)
    return pts, w


def _shape_grads(order, pts):
    """dN/dxi at each quadrature point, shape (ng, nen, 2)."""
    out = []
    for xi, eta in pts:
        if order == 1:
            out.append([[-1, -1], [1, 0], [0, 1]])
        else:
            L1 = 1 - xi - eta
            out.append([
                [-(4 * L1 - 1), -(4 * L1 - 1)],
                [4 * xi - 1, 0],
                [0, 4 * eta - 1],
                [4 * (L1 - xi), -4 * xi],
                [4 * eta, 4 * xi],
                [-4 * eta, 4 * (L1 - eta)],
            ])
    return np.array(out, dtype=float)


def _edge_rule(n_nodes):
    g, w = np.polynomial.legendre.leggauss(3)
    if n_nodes == 2:
        N = np.stack([0.5 * (1 - g), 0.5 * (1 + g)], axis=1)
        dN = np.tile([-0.5, 0.5], (len(g), 1))
    else:
        N = np.stack([0.5 * g * (g - 1), 0.5 * g * (g + 1), 1 - g**2], axis=1)
        dN = np.stack([g - 0.5, g + 0.5, -2 * g], axis=1)
    return N, dN, w


class FEModel:
    """Precomputed reference-configuration data for one mesh and material map.

    Degrees of freedom are numbered per representative node (bonded nodes
    share one), two per node.
    """

    def __init__(self, mesh, materials=None, fixed_sets=("leading_edge_fixed",)):
        self.mesh = mesh
        self.materials = dict(DEFAULT_MATERIALS if materials is None else materials)
        missing = set(np.unique(mesh.materials)) - set(self.materials)
        if missing:
            raise GeometryError(f"no material given for ids {sorted(missing)}")

        rep = mesh.node_representatives()
        uniq, self.node_dof_index = np.unique(rep, return_inverse=True)
        self.n_dof_nodes = len(uniq)
        self.n_dofs = 2 * self.n_dof_nodes
        self.conn = self.node_dof_index[mesh.elements]

        order = mesh.order
        pts, w = _triangle_rule(order)
        dNdxi = _shape_grads(order, pts)
        Xe = mesh.nodes[mesh.elements]  # (ne, nen, 2)
        J0 = np.einsum("eni,gna->egia", Xe, dNdxi)
        det0 = J0[..., 0, 0] * J0[..., 1, 1] - J0[..., 0, 1] * J0[..., 1, 0]
        if np.any(det0 <= 0):
            bad = int(np.argwhere(det0 <= 0)[0, 0])
            raise GeometryError(f"element {bad} has a non-positive reference Jacobian")
        J0inv = np.linalg.inv(J0)
        self.dNdX = np.einsum("gna,egaJ->egnJ", dNdxi, J0inv)
        self.wdet = w[None, :] * det0
        self.groups = {m: np.flatnonzero(mesh.materials == m) for m in np.unique(mesh.materials)}

        nen = mesh.elements.shape[1]
        edof = np.empty((mesh.n_elements, nen, 2), dtype=int)
        edof[..., 0] = 2 * self.conn
        edof[..., 1] = 2 * self.conn + 1
        self.edof = edof.reshape(mesh.n_elements, -1)
        self._rows = np.repeat(self.edof, 2 * nen, axis=1).ravel()
        self._cols = np.tile(self.edof, (1, 2 * nen)).ravel()

        fixed_nodes = np.unique(np.concatenate([mesh.boundary_nodes(s) for s in fixed_sets] or [[]]).astype(int))
        fixed_dn = np.unique(self.node_dof_index[fixed_nodes]) if fixed_nodes.size else np.zeros(0, dtype=int)
        fixed = np.zeros(self.n_dofs, dtype=bool)
        fixed[2 * fixed_dn] = True
        fixed[2 * fixed_dn + 1] = True
        self.fixed = fixed
        self.free = np.flatnonzero(~fixed)

        # reference coordinates per dof node
        self.X = np.zeros((self.n_dof_nodes, 2))
        self.X[self.node_dof_index] = mesh.nodes
        self._load_ops = {}

    # -- displacement bookkeeping ------------------------------------------
    def nodal(self, u):
        """Per-mesh-node (u, v) array from a dof vector."""
        return u.reshape(-1, 2)[self.node_dof_index]

    def from_nodal(self, un):
        u = np.zeros((self.n_dof_nodes, 2))
        u[self.node_dof_index] = un
        return u.ravel()

    # -- element kinematics ---------------------------------------------------
    def deformation_gradients(self, u):
        ue = u.reshape(-1, 2)[self.conn]
        F = np.einsum("eni,egnJ->egiJ", ue, self.dNdX)
        F[..., 0, 0] += 1.0
        F[..., 1, 1] += 1.0
        detF = F[..., 0, 0] * F[..., 1, 1] - F[..., 0, 1] * F[..., 1, 0]
        if np.any(detF <= 0):
            bad = int(np.argwhere(detF <= 0)[0, 0])
            raise InvertedElementError(f"element {bad} inverted (det F = {detF.min():.3e})", element=bad)
        return F

    def internal(self, u, tangent=True):
        """Return (stored energy, internal force vector, tangent stiffness or None)."""
        F = self.deformation_gradients(u)
        ne, ng = F.shape[:2]
        energy = 0.0
        P = np.empty_like(F)
        A = np.empty(F.shape[:2] + (2, 2, 2, 2)) if tangent else None
        for mid, idx in self.groups.items():
            Fm = F[idx]
            C = np.einsum("...kI,...kJ->...IJ", Fm, Fm)
            W, S, CC = self.materials[mid].response(C)
            energy += float(np.sum(W * self.wdet[idx]))
            P[idx] = np.einsum("...iK,...KJ->...iJ", Fm, S)
            if tangent:
                geo = np.einsum("ik,...JL->...iJkL", np.eye(2), S)
                mat = np.einsum("...iI,...IJKL,...kK->...iJkL", Fm, CC, Fm)
                A[idx] = geo + mat
        fe = np.einsum("eg,egiJ,egnJ->eni", self.wdet, P, self.dNdX)
        f = np.bincount(self.edof.ravel(), weights=fe.reshape(ne, -1).ravel(), minlength=self.n_dofs)
        K = None
        if tangent:
            Ke = np.einsum("eg,egnJ,egiJkL,egmL->enimk", self.wdet, self.dNdX, A, self.dNdX)
            K = sp.coo_matrix((Ke.reshape(ne, -1).ravel(), (self._rows, self._cols)), shape=(self.n_dofs,) * 2).tocsr()
        return energy, f, K

    def stored_energy(self, u):
        F = self.deformation_gradients(u)
        total = 0.0
        for mid, idx in self.groups.items():
            Fm = F[idx]
            C = np.einsum("...kI,...kJ->...IJ", Fm, Fm)
            total += float(np.sum(self.materials[mid].energy(C) * self.wdet[idx]))
        return total

    # -- follower pressure ----------------------------------------------------
    def load_operator(self, chamber):
        """Constant matrix G with f_ext = p G x, x the deformed nodal coordinates."""
        if chamber not in self._load_ops:
            edges = self.mesh.boundary_sets.get(chamber)
            if edges is None or not len(edges):
                raise GeometryError(f"mesh has no boundary set {chamber!r}")
            N, dN, w = _edge_rule(edges.shape[1])
            # per edge block: d f_i / d x_j = sum_g w N_i N'_j R
            B = np.einsum("g,gi,gj->ij", w, N, dN)
            blk = np.einsum("ij,ab->iajb", B, _ROT)  # (n, 2, n, 2)
            en = self.node_dof_index[edges]
            ed = np.stack([2 * en, 2 * en + 1], axis=-1).reshape(len(edges), -1)
            k = ed.shape[1]
            rows = np.repeat(ed, k, axis=1).ravel()
            cols = np.tile(ed, (1, k)).ravel()
            vals = np.tile(blk.reshape(-1), len(edges))
            self._load_ops[chamber] = sp.coo_matrix((vals, (rows, cols)), shape=(self.n_dofs,) * 2).tocsr()
        return self._load_ops[chamber]

    def external(self, u, pressure_pa, chamber):
        G = self.load_operator(chamber)
        x = self.X.ravel() + u
        return pressure_pa * (G @ x), pressure_pa * G

    def residual_tangent(self, u, pressure_pa, chamber, tangent=True):
        _, fint, K = self.internal(u, tangent=tangent)
        if pressure_pa:
            fext, Kp = self.external(u, pressure_pa, chamber)
            r = fint - fext
            if tangent:
                K = K - Kp
        else:
            r = fint
        return r, K

    def total_energy(self, u, pressure_pa=0.0, chamber="chamber_upper"):
        """Stored energy minus pressure work, whose gradient is the residual."""
        energy = self.stored_energy(u)
        if pressure_pa:
            x = self.X.ravel() + u
            energy -= pressure_pa * 0.5 * float(x @ (self.load_operator(chamber) @ x))
        return energy


def assemble(mesh, state, pressure_pa, chamber="chamber_upper", materials=None, model=None):
    """Residual and tangent at ``state`` with the fixed rows and columns eliminated.

    Returns ``(residual, tangent, model)``; ``model.free`` lists the retained
    dofs in order.
    """
    model = model or FEModel(mesh, materials)
    u = model.from_nodal(np.asarray(state.displacements, dtype=float))
    r, K = model.residual_tangent(u, pressure_pa, chamber)
    free = model.free
    return r[free], K[free][:, free], model
