# Copyright 2026 The tomoqkd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the frozen reference values used by the C++ unit tests.

Everything is computed at 50 digits from the definitions. Eve's block
error is enumerated over all 2^L error patterns instead of using the
closed-form sum.
"""

import itertools

import mpmath as mp

mp.mp.dps = 50


def H(p):
    p = mp.mpf(p)
    if p == 0 or p == 1:
        return mp.mpf(0)
    return -p * mp.log(p, 2) - (1 - p) * mp.log(1 - p, 2)


def marginals(p):
    p00, p01, p10, p11 = p
    return dict(p0=p00 + p01, p1=p10 + p11, q0=p00 + p10, q1=p01 + p11, r0=p01 + p10, r1=p00 + p11)


def overlap(num, den):
    return mp.mpf(1) if den == 0 else num / den


def lambdas(p):
    p00, p01, p10, p11 = p
    return dict(
        z=[overlap(p00 - p01, p00 + p01), overlap(p10 - p11, p10 + p11)],
        x=[overlap(p00 - p10, p00 + p10), overlap(p01 - p11, p01 + p11)],
        y=[overlap(p01 - p10, p01 + p10), overlap(p00 - p11, p00 + p11)],
    )


def eta(l):
    return (1 + mp.sqrt(1 - l * l)) / 2


def report(p):
    p = [mp.mpf(x) for x in p]
    m = marginals(p)
    lam = lambdas(p)
    e = {b: [eta(v) for v in lam[b]] for b in lam}
    i_ab = 1 - (H(m["p0"]) + H(m["q0"]) + H(m["r0"])) / 3
    i_x = m["q0"] * (1 - H(e["x"][0])) + m["q1"] * (1 - H(e["x"][1]))
    i_y = m["r0"] * (1 - H(e["y"][0])) + m["r1"] * (1 - H(e["y"][1]))
    i_z = m["p0"] * (1 - H(e["z"][0])) + m["p1"] * (1 - H(e["z"][1]))
    i_be = (i_x + i_y + i_z) / 3
    lhs = m["p1"] * m["q1"] * m["r0"]
    base = m["p0"] * m["q0"] * m["r1"]
    prod = e["x"][0] * e["y"][1] * e["z"][0] * (1 - e["x"][0]) * (1 - e["y"][1]) * (1 - e["z"][0])
    inc = base * 8 * mp.sqrt(prod) - lhs
    coh = base * (lam["x"][0] * lam["y"][1] * lam["z"][0]) ** 2 - lhs
    return dict(m=m, lam=lam, eta=e, i_ab=i_ab, i_be=i_be, i_be_basis=(i_x, i_y, i_z), ck=i_ab - i_be, inc=inc,
                coh=coh)


def eve_vote_error(etas):
    """P(majority of per-position guesses is wrong), ties at half weight."""
    L = len(etas)
    total = mp.mpf(0)
    for wrong in itertools.product((0, 1), repeat=L):
        w = mp.mpf(1)
        for bad, et in zip(wrong, etas):
            w *= (1 - et) if bad else et
        k = sum(wrong)
        if 2 * k > L:
            total += w
        elif 2 * k == L:
            total += w / 2
    return total


def block(p, nx, ny, nz):
    p = [mp.mpf(x) for x in p]
    r = report(p)
    m, e, lam = r["m"], r["eta"], r["lam"]
    w1 = m["p0"] ** nz * m["q0"] ** nx * m["r1"] ** ny
    w2 = m["p1"] ** nz * m["q1"] ** nx * m["r0"] ** ny
    case1 = [e["x"][0]] * nx + [e["y"][1]] * ny + [e["z"][0]] * nz
    case2 = [e["x"][1]] * nx + [e["y"][0]] * ny + [e["z"][1]] * nz
    big1 = lam["x"][0] ** nx * lam["y"][1] ** ny * lam["z"][0] ** nz
    big2 = lam["x"][1] ** nx * lam["y"][0] ** ny * lam["z"][1] ** nz
    coh = lambda l: (1 - mp.sqrt(1 - l * l)) / 2
    return dict(e_ab=w2 / (w1 + w2), acc=w1 + w2, inc1=eve_vote_error(case1), inc2=eve_vote_error(case2),
                coh1=coh(big1), coh2=coh(big2), w1=w1 / (w1 + w2))


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


if __name__ == "__main__":
    show("H(11/15)", H(mp.mpf(11) / 15))
    for label, p in [("werner08", [0.8, 0.2 / 3, 0.2 / 3, 0.2 / 3]), ("s1", [0.7, 0.1, 0.15, 0.05]),
                     ("s2", [0.55, 0.05, 0.3, 0.1])]:
        p = [mp.mpf(x) for x in p]
        if label == "werner08":
            p = [mp.mpf(4) / 5] + [mp.mpf(1) / 15] * 3
        r = report(p)
        print(f"[{label}]")
        for b in "xyz":
            show(f"lambda_{b}", r["lam"][b][0])
            show(f"lambda_{b}1", r["lam"][b][1])
            show(f"eta_{b}0", r["eta"][b][0])
        for k in ("i_ab", "i_be", "ck", "inc", "coh"):
            show(k, r[k])
        for counts in [(1, 1, 1), (2, 2, 2), (3, 1, 2), (4, 4, 4)]:
            b = block(p, *counts)
            print(f"  block {counts}: " + ", ".join(f"{k}={mp.nstr(v, 20)}" for k, v in b.items()))
