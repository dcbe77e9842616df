#!/usr/bin/env python3
"""Smoke test for the kickdyn_py extension module.

Builds nothing itself: run `cargo build -p kickdyn-py` (or --release) first.
The script locates the compiled cdylib under target/, stages it under an
importable name, and exercises the main types and operations end to end.
"""

import math
import os
import shutil
import sys
import tempfile


def stage_module():
    here = os.path.dirname(os.path.abspath(__file__))
    root = os.path.dirname(here)
    candidates = [
        os.path.join(root, "target", profile, "libkickdyn_py.so")
        for profile in ("release", "debug")
    ]
    built = [p for p in candidates if os.path.exists(p)]
    if not built:
        sys.exit(
            "libkickdyn_py.so not found; run `cargo build -p kickdyn-py` first"
        )
    newest = max(built, key=os.path.getmtime)
    stage = tempfile.mkdtemp(prefix="kickdyn_py_")
    shutil.copy(newest, os.path.join(stage, "kickdyn_py.so"))
    sys.path.insert(0, stage)
    return newest


SO_PATH = stage_module()
import kickdyn_py as kd  # noqa: E402

failures = 0


def check(name, ok, detail=""):
    global failures
    status = "PASS" if ok else "FAIL"
    print(f"{status} {name} {detail}")
    if not ok:
        failures += 1


# Free evolution of |01>: C(t) = |sin 4Jt|.
times, values = kd.timeseries_kicks("01", [], alpha=0.0, beta=0.0, j=1.0, t_max=5.0, dt=0.01)
worst = max(abs(c - abs(math.sin(4.0 * t))) for t, c in zip(times, values))
check("free-evolution-law", worst < 1e-10, f"max dev {worst:.2e}")

# Bell state is maximally entangled and stays so before a kick.
bell = kd.named_state("psi+")
check("bell-concurrence", abs(kd.concurrence_pure(bell) - 1.0) < 1e-12)

# Composed kick propagators are unitary and block-structured.
prop = kd.kick_sequence_propagator([(5.0, 1), (10.0, -1)], alpha=3.0, beta=1.0, j=1.0, t=12.0)
check("propagator-unitarity", prop.unitarity_defect() < 1e-12,
      f"defect {prop.unitarity_defect():.2e}")
m = prop.matrix()
block_zeros = all(
    m[r][c] == 0 for r in range(4) for c in range(4)
    if not (r == c == 0 or r == c == 3 or (1 <= r <= 2 and 1 <= c <= 2))
)
check("propagator-block-structure", block_zeros)

# Closed-form parameters equal the composed propagator.
events = [(3.0, 1), (7.0, 1)]
closed = kd.closed_form_kick_params(events, alpha=2.5, beta=0.5, j=1.3, t=9.0)
composed = kd.kick_sequence_propagator(events, alpha=2.5, beta=0.5, j=1.3, t=9.0)
diff = max(
    abs(a - b) for ra, rb in zip(closed.matrix(), composed.matrix()) for a, b in zip(ra, rb)
)
check("closed-form-vs-composition", diff < 1e-12, f"max diff {diff:.2e}")

# Evolve + measure matches the single-kick Bell closed form.
t1, j, alpha, beta, t = 5.0, 1.0, 2.0, 1.0, 8.0
u = kd.kick_sequence_propagator([(t1, 1)], alpha=alpha, beta=beta, j=j, t=t)
pipeline = kd.concurrence_pure(kd.evolve(bell, u))
closed_c = kd.bell_kick_concurrence(alpha - beta, j, t, t1)
check("bell-closed-form", abs(pipeline - closed_c) < 1e-10,
      f"|{pipeline:.12f} - {closed_c:.12f}|")

# Wootters oracle agrees with the pure-state formula.
state = kd.evolve(kd.named_state("01"), u)
rho = [[state[r] * state[c].conjugate() for c in range(4)] for r in range(4)]
check("wootters-vs-pure",
      abs(kd.wootters_concurrence(rho) - kd.concurrence_pure(state)) < 1e-8)

# A narrow Gaussian pulse approaches the analytic kick.
kt, kc = kd.timeseries_kicks("01", [(5.0, 1)], alpha=2.0, beta=1.0, j=1.0, t_max=10.0, dt=0.01)
pt, pc = kd.timeseries_pulses("01", [(5.0, 1)], tau=0.05, alpha=2.0, beta=1.0, j=1.0,
                              t_max=10.0, dt=0.01)
tail = [abs(a - b) for t, a, b in zip(kt, kc, pc) if t > 6.0]
check("pulse-approaches-kick", max(tail) < 0.12, f"max post-pulse gap {max(tail):.3f}")

# Time ordering is observable: exact vs no-ordering differ for alpha != beta.
_, exact = kd.timeseries_kicks("psi+", [(5.0, 1), (10.0, -1)], alpha=3.0, beta=1.0,
                               j=1.0, t_max=25.0, dt=0.05)
_, naive = kd.timeseries_no_ordering("psi+", [(5.0, 1), (10.0, -1)], alpha=3.0, beta=1.0,
                                     j=1.0, t_max=25.0, dt=0.05)
gap = max(abs(a - b) for a, b in zip(exact, naive))
check("ordering-observable", gap > 0.01, f"max gap {gap:.3f}")

# Full integrator keeps the norm and the parity sectors.
_, states = kd.integrate_pulses(bell, [(5.0, 1)], tau=0.1, alpha=2.0, beta=1.0,
                                j=1.0, t0=0.0, t1=8.0, dt=0.001)
final = states[-1]
norm = math.sqrt(sum(abs(a) ** 2 for a in final))
check("integrator-norm", abs(norm - 1.0) < 1e-8, f"norm {norm:.12f}")
check("integrator-sector", abs(final[0]) < 1e-12 and abs(final[3]) < 1e-12)

print(f"\nmodule: {SO_PATH}")
if failures:
    sys.exit(f"{failures} smoke checks failed")
print("all smoke checks passed")
