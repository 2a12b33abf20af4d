"""Model validation and small model-level utilities."""
from __future__ import annotations

import numpy as np

from .types import Diagnostic, RobotModel

_AXIS_TOL = 1e-9
_SYM_TOL = 1e-9


def validate_model(model: RobotModel):
    """Check every type invariant; returns a list of diagnostics.

    Empty list means the model is fully valid. Severity ``error`` marks a
    hard invariant violation; the triangle inequality on principal moments
    is a ``warning`` only (some exported descriptions violate it mildly).
    """
    diags = []

    seen = set()
    for l in model.links:
        if l.name in seen:
            diags.append(Diagnostic("error", l.name, "duplicate link name"))
        seen.add(l.name)
    seen = set()
    for j in model.joints:
        if j.name in seen:
            diags.append(Diagnostic("error", j.name, "duplicate joint name"))
        seen.add(j.name)

    for l in model.links:
        si = l.inertia
        if si.mass < 0:
            diags.append(Diagnostic("error", l.name, f"negative mass {si.mass}"))
        if not np.all(np.isfinite(si.com)) or not np.isfinite(si.mass):
            diags.append(Diagnostic("error", l.name, "non-finite inertial data"))
            continue
        I = si.inertia_rot
        if np.max(np.abs(I - I.T)) > _SYM_TOL:
            diags.append(Diagnostic("error", l.name, "inertia tensor not symmetric"))
            continue
        eig = np.linalg.eigvalsh(I)
        if eig[0] < -1e-12:
            diags.append(
                Diagnostic("error", l.name, f"negative inertia eigenvalue {eig[0]:.3e}")
            )
        else:
            # Principal moments must satisfy the triangle inequality for any
            # real mass distribution; warn, don't fail.
            a, b, c = np.clip(eig, 0.0, None)
            if a + b < c - 1e-12 * max(1.0, c):
                diags.append(
                    Diagnostic(
                        "warning",
                        l.name,
                        f"triangle inequality violated on principal moments "
                        f"({a:.4g} + {b:.4g} < {c:.4g})",
                    )
                )

    link_names = set(model.link_map)
    for j in model.joints:
        norm = float(np.linalg.norm(j.axis))
        if j.movable and abs(norm - 1.0) > _AXIS_TOL:
            diags.append(
                Diagnostic("error", j.name, f"joint axis norm {norm!r} is not 1")
            )
        if j.lower > j.upper:
            diags.append(
                Diagnostic("error", j.name, f"limits reversed ({j.lower} > {j.upper})")
            )
        if j.movable and not (
            np.isfinite(j.lower)
            and np.isfinite(j.upper)
            and np.isfinite(j.effort)
            and np.isfinite(j.velocity)
        ):
            diags.append(Diagnostic("error", j.name, "non-finite limits"))
        if j.parent not in link_names:
            diags.append(
                Diagnostic("error", j.name, f"unknown parent link {j.parent!r}")
            )
        if j.child not in link_names:
            diags.append(Diagnostic("error", j.name, f"unknown child link {j.child!r}"))

    if model.root_link not in link_names:
        diags.append(
            Diagnostic("error", model.root_link, "root link not among links")
        )
    else:
        # Single connected tree: every non-root link has exactly one parent
        # joint and is reachable from the root.
        parents = {}
        for j in model.joints:
            if j.child in parents:
                diags.append(Diagnostic("error", j.child, "link has two parent joints"))
            parents[j.child] = j.parent
        if model.root_link in parents:
            diags.append(Diagnostic("error", model.root_link, "root link is a joint child"))
        reachable = {model.root_link}
        frontier = [model.root_link]
        children_of = {}
        for j in model.joints:
            children_of.setdefault(j.parent, []).append(j.child)
        while frontier:
            l = frontier.pop()
            for c in children_of.get(l, []):
                if c not in reachable:
                    reachable.add(c)
                    frontier.append(c)
        orphans = link_names - reachable
        for l in sorted(orphans):
            diags.append(Diagnostic("error", l, "link not reachable from root"))

    for cf in model.contact_frames:
        if cf not in link_names:
            diags.append(
                Diagnostic("error", cf, "contact frame names a nonexistent link")
            )
    for f in model.frames:
        if f.link not in link_names:
            diags.append(
                Diagnostic("error", f.name, f"frame attached to nonexistent link {f.link!r}")
            )
        if f.name in link_names:
            diags.append(
                Diagnostic("error", f.name, "frame name collides with a link name")
            )

    return diags


def neutral_configuration(model: RobotModel) -> np.ndarray:
    """Zero vector clamped into joint limits (non-fixed joints, model order)."""
    lo, hi = model.position_limits
    return np.clip(np.zeros(model.nq), lo, hi)
