"""High-precision reference values for the key-rate chain.

Evaluates every step in 50-digit arithmetic with mpmath. It shares no code
with the package, and it takes the symplectic eigenvalues from the
eigenvalues of i*Omega*gamma rather than the closed form. Writes
tests/data/keyrate_reference.json.

    python scripts/keyrate_oracle.py [--check]
"""

import argparse
import json
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "keyrate_reference.json"

POINTS = {
    "asym_D0_vm6_vl0.005": dict(v_mod=6, v_laser="0.005", l_ac=0, l_bc=0),
    "asym_D0_vm6_vl0.005_exact": dict(v_mod=6, v_laser="0.005", l_ac=0, l_bc=0, mode="exact"),
    "sym_D0_vm12_vl0.022": dict(v_mod=12, v_laser="0.022", l_ac=0, l_bc=0),
    "asym_D10_vm6_vl0.005": dict(v_mod=6, v_laser="0.005", l_ac=10, l_bc=0),
    "asym_D20_vm6_vl0.005_lo1e4": dict(v_mod=6, v_laser="0.005", l_ac=20, l_bc=0, lo_ratio="1e4"),
    "sym_D3_vm12_vl0.01": dict(v_mod=12, v_laser="0.01", l_ac="1.5", l_bc="1.5"),
}


def G(x):
    x = mp.mpf(x)
    if x == 0:
        return mp.mpf(0)
    return (x + 1) * mp.log(x + 1, 2) - x * mp.log(x, 2)


def symplectic_eigs(a, b, c):
    gamma = mp.matrix([[a, 0, c, 0], [0, a, 0, -c], [c, 0, b, 0], [0, -c, 0, b]])
    omega = mp.matrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    ev = mp.eig(mp.mpc(0, 1) * omega * gamma, left=False, right=False)
    mags = sorted((abs(e) for e in ev), reverse=True)
    # eigenvalues come in +/- pairs
    return mags[0], mags[2]


def chain(v_mod, v_laser, l_ac, l_bc, eps_a="0.002", eps_b="0.002", beta="0.96",
          lo_ratio="1e8", loss="0.2", mode="approx"):
    v_mod, v_laser = mp.mpf(v_mod), mp.mpf(v_laser)
    eps_a, eps_b, beta = mp.mpf(eps_a), mp.mpf(eps_b), mp.mpf(beta)
    loss, lo = mp.mpf(loss), mp.mpf(lo_ratio) * v_mod
    t_a = mp.power(10, -loss * mp.mpf(l_ac) / 10)
    t_b = mp.power(10, -loss * mp.mpf(l_bc) / 10)
    v = v_mod + 1
    chi_a = 1 / t_a - 1 + eps_a
    chi_b = 1 / t_b - 1 + eps_b
    g_sq = 2 * (v - 1) / (t_b * (v + 1))
    eta = g_sq * t_a / 2
    # general displacement form, evaluated at the optimal gain
    eps_c = (1 + chi_a + (t_b / t_a) * (chi_b - 1)
             + (t_b / t_a) * (mp.sqrt(2 / (t_b * g_sq)) * mp.sqrt(v - 1) - mp.sqrt(v + 1)) ** 2)
    v_prc = v_laser + (chi_a + chi_b + 2) / lo
    eps_prc = v_mod * v_prc if mode == "approx" else 2 * v_mod * (1 - mp.exp(-v_prc / 2))
    chi_t = 1 / eta - 1 + eps_c + eps_prc
    a, b, c = v, eta * (v + chi_t), mp.sqrt(eta * (v * v - 1))
    i_ab = mp.log((a + 1) / (a + 1 - c * c / (b + 1)), 2)
    l1, l2 = symplectic_eigs(a, b, c)
    # conditional state of Alice after Bob's heterodyne: a I - c Z (b+1)^-1 c Z
    l3 = a - c * c / (b + 1)
    chi_be = G((l1 - 1) / 2) + G((l2 - 1) / 2) - G((l3 - 1) / 2)
    return {
        "t_a": t_a, "t_b": t_b, "eta": eta, "eps_c": eps_c, "eps_prc": eps_prc,
        "chi_t": chi_t, "a": a, "b": b, "c": c, "i_ab": i_ab,
        "lambda1": l1, "lambda2": l2, "lambda3": l3, "chi_be": chi_be,
        "key_rate": beta * i_ab - chi_be,
    }


def compute():
    out = {"points": {}, "scalars": {}}
    for name, kw in POINTS.items():
        out["points"][name] = {
            "inputs": {k: str(v) for k, v in kw.items()},
            "values": {k: mp.nstr(val, 30) for k, val in chain(**kw).items()},
        }
    s = out["scalars"]
    s["G(0.76615)"] = mp.nstr(G(mp.mpf("0.76615")), 30)
    s["eps_prc_exact(6,0.005)"] = mp.nstr(12 * (1 - mp.exp(mp.mpf("-0.0025"))), 30)
    t = mp.power(10, mp.mpf("-0.2"))
    e = mp.mpf("0.002")
    s["eps_c_opt(T_A=10^-0.2,T_B=1)"] = mp.nstr((1 / t) * (e - 2) + e + 2 / t, 30)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare with the frozen file instead of writing")
    args = ap.parse_args()
    data = compute()
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if args.check:
        same = OUT.read_text() == text
        print("frozen reference is current" if same else "frozen reference is STALE")
        return 0 if same else 1
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(text)
    k = data["points"]["asym_D0_vm6_vl0.005"]["values"]["key_rate"]
    print(f"wrote {OUT}\nK(relay at Bob, D=0, V_M=6, V_laser=0.005) = {k}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
