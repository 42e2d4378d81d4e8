#!/usr/bin/env python3
"""Reference batch-growth integration on the bundled fixtures.

Implements the same scheme the Rust crates use: per step, Michaelis-Menten
uptake bounds from current sugar concentrations (glucose-inhibited xylose
term), an FBA solve with an L1 secondary solve over the tracked exchanges,
then an explicit Euler update of biomass and substrate pools. Values printed
here are frozen into the Rust test suite as reference expectations.

Usage: reference_dfba.py MODEL.json G0 X0 [--nh4 CAP] [--probe]
"""
import json
import sys
import numpy as np
from scipy.optimize import linprog

VG_MAX, KG = 10.0, 0.015
VX_MAX, KX, KIG = 9.0, 0.01, 0.01
O2_MAX = 5.0
DT, STEPS = 0.1, 200
B0 = 0.01
GLC, XYL, O2 = "EX_glc__D_e", "EX_xyl__D_e", "EX_o2_e"
BIO = "BIOMASS_Ecoli_core_w_GAM"


def load(path):
    doc = json.load(open(path))
    rids = [r["id"] for r in doc["reactions"]]
    mets = [m["id"] for m in doc["metabolites"]]
    midx = {m: i for i, m in enumerate(mets)}
    S = np.zeros((len(mets), len(rids)))
    lb = np.zeros(len(rids))
    ub = np.zeros(len(rids))
    for j, r in enumerate(doc["reactions"]):
        for met, c in r["metabolites"].items():
            S[midx[met], j] = c
        lb[j], ub[j] = r["lower_bound"], r["upper_bound"]
    return S, lb, ub, {r: j for j, r in enumerate(rids)}


def fba_l1(S, lb, ub, jidx, tracked):
    """max biomass, then min sum |v_i| over tracked columns at fixed optimum."""
    m, n = S.shape
    c = np.zeros(n)
    c[jidx[BIO]] = -1.0
    res = linprog(c, A_eq=S, b_eq=np.zeros(m), bounds=list(zip(lb, ub)),
                  method="highs")
    if res.status != 0:
        return 0.0, {t: 0.0 for t in tracked}
    mu = -res.fun
    # secondary: min sum t_i, t_i >= |v_i|, biomass flux pinned
    nt = len(tracked)
    c2 = np.concatenate([np.zeros(n), np.ones(nt)])
    Se = np.hstack([S, np.zeros((m, nt))])
    A_ub = np.zeros((2 * nt + 1, n + nt))
    b_ub = np.zeros(2 * nt + 1)
    for k, t in enumerate(tracked):
        j = jidx[t]
        A_ub[2 * k, j], A_ub[2 * k, n + k] = 1.0, -1.0      # v - t <= 0
        A_ub[2 * k + 1, j], A_ub[2 * k + 1, n + k] = -1.0, -1.0  # -v - t <= 0
    A_ub[2 * nt, jidx[BIO]] = -1.0                          # -v_bio <= -(mu - tol)
    b_ub[2 * nt] = -(mu - 1e-9)
    bounds = list(zip(lb, ub)) + [(0, None)] * nt
    res2 = linprog(c2, A_eq=Se, b_eq=np.zeros(m), A_ub=A_ub, b_ub=b_ub,
                   bounds=bounds, method="highs")
    v = res2.x if res2.status == 0 else res.x
    return mu, {t: v[jidx[t]] for t in tracked}


def simulate(path, g0, x0, nh4_cap=None):
    S, lb0, ub0, jidx = load(path)
    B, G, X = B0, g0, x0
    out = []
    for k in range(STEPS):
        vg = VG_MAX * G / (KG + G)
        vx = VX_MAX * X / (KX + X) / (1.0 + G / KIG)
        lb = lb0.copy()
        lb[jidx[GLC]] = -vg
        lb[jidx[XYL]] = -vx
        lb[jidx[O2]] = -O2_MAX
        if nh4_cap is not None:
            lb[jidx["EX_nh4_e"]] = -nh4_cap
        mu, v = fba_l1(S, lb, ub0, jidx, [GLC, XYL, O2])
        ug = max(0.0, -v[GLC])
        ux = max(0.0, -v[XYL])
        Bn = B * (1.0 + mu * DT)
        G = max(0.0, G - ug * B * DT)
        X = max(0.0, X - ux * B * DT)
        B = Bn
        out.append((0.1 * (k + 1), B, G, X, mu, ug, ux))
    return out


def probe(path):
    """Marginal value of a small xylose allowance while glucose saturates."""
    S, lb0, ub0, jidx = load(path)
    for nh4 in (None, 6.0, 5.0, 4.0, 3.0):
        lb = lb0.copy()
        lb[jidx[GLC]] = -VG_MAX
        lb[jidx[O2]] = -O2_MAX
        if nh4 is not None:
            lb[jidx["EX_nh4_e"]] = -nh4
        mu0, v0 = fba_l1(S, lb, ub0, jidx, [GLC, XYL, O2])
        lb[jidx[XYL]] = -0.01
        mu1, v1 = fba_l1(S, lb, ub0, jidx, [GLC, XYL, O2])
        # xylose-phase growth under the same cap
        lb[jidx[GLC]] = 0.0
        lb[jidx[XYL]] = -VX_MAX
        mux, vx = fba_l1(S, lb, ub0, jidx, [GLC, XYL, O2])
        print(f"nh4={nh4}: mu_glc={mu0:.9f} dmu(xyl 0.01)={mu1 - mu0:.3e} "
              f"xyl_uptake={-v1[XYL]:.3e} glc_uptake={-v1[GLC]:.6f} | "
              f"mu_xylphase={mux:.9f} xyl_uptake={-vx[XYL]:.6f}")


if __name__ == "__main__":
    path = sys.argv[1]
    if "--probe" in sys.argv:
        probe(path)
        sys.exit(0)
    g0, x0 = float(sys.argv[2]), float(sys.argv[3])
    nh4 = None
    if "--nh4" in sys.argv:
        nh4 = float(sys.argv[sys.argv.index("--nh4") + 1])
    traj = simulate(path, g0, x0, nh4)
    shift = next((i for i, r in enumerate(traj) if r[2] <= 0.1), None)
    print(f"# G<=0.1 first at step {shift} (t={traj[shift][0]:.1f} h)"
          if shift is not None else "# glucose never depleted")
    pre = [r for r in traj if r[2] > 0.1]
    xyl_pre = g0 and (x0 - min(r[3] for r in pre)) if pre else 0.0
    print(f"# xylose consumed while G>0.1: {x0 - min(r[3] for r in pre):.6e} mM"
          if pre else "")
    for i in (0, 1, 49, 99, 149, 199):
        t, B, G, X, mu, ug, ux = traj[i]
        print(f"t={t:5.1f} B={B:.9f} G={G:.9f} X={X:.9f} mu={mu:.6f} "
              f"ug={ug:.6f} ux={ux:.6f}")
