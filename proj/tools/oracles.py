# Copyright 2026 The hflsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent high-precision evaluation of the reference values used by the tests.

Run `python3 tools/oracles.py` to print every value; the unit tests hard-code
the printed numbers.
"""

from mpmath import mp, mpf, sqrt, log, binomial

mp.dps = 40


def slant_distance():
    return sqrt(mpf(1000) ** 2 + mpf(150) ** 2)


def shannon_rate():
    b, p, d, alpha, n0 = mpf(10) ** 6, mpf("0.5"), mpf(1000), 2, mpf(10) ** -20
    return b * log(1 + p * d ** -alpha / (n0 * b), 2)


def unit_time():
    return mpf("0.01") + mpf("0.5") * 50 * 1000 / mpf(10) ** 9


def compute_energy():
    return 5 * mpf(10) ** 18 * 1 * 100 * 100 * mpf(10) ** -28 / 2


def kl_two_point():
    return mpf("0.7") * log(mpf("0.7") / mpf("0.5")) + mpf("0.3") * log(mpf("0.3") / mpf("0.5"))


def relocation_pair():
    d, v, p = mpf(320), mpf(16), mpf(160)
    return d / v, p * d / v


def binomial_tail_outside(n=150, p=mpf("0.3"), lo=30, hi=60):
    inside = sum(binomial(n, k) * p ** k * (1 - p) ** (n - k) for k in range(lo, hi + 1))
    return 1 - inside


def scheme_b_support_miss(n_devices=1000):
    # Probability that a uniform draw over {2..10} never hits one given count.
    return n_devices * (mpf(8) / 9) ** n_devices


def main():
    rows = [
        ("slant distance (1000,0)-(0,0,150) [m]", slant_distance()),
        ("rate B=1e6 p=0.5 d=1000 a=2 N0=1e-20 [b/s]", shannon_rate()),
        ("unit time t_fix=0.01 phi=0.5 c=50 D=1000 f=1e9 [s]", unit_time()),
        ("compute energy h=5 f=1e9 c=100 D=100 theta=1e-28 [J]", compute_energy()),
        ("KL((0.7,0.3)||(0.5,0.5)) [nats]", kl_two_point()),
        ("relocation 320 m at 16 m/s, 160 W: time [s]", relocation_pair()[0]),
        ("relocation 320 m at 16 m/s, 160 W: energy [J]", relocation_pair()[1]),
        ("P(Bin(150,0.3) outside [30,60])", binomial_tail_outside()),
        ("union bound: some class count unseen in 1000 scheme-B draws", scheme_b_support_miss()),
        ("fitness 0.6*0.5+0.2*0.8+0.2*0.2", mpf("0.6") * mpf("0.5") + mpf("0.2") * mpf("0.8")
         + mpf("0.2") * mpf("0.2")),
        ("fedavg [1,1]x1 and [3,3]x3", (1 * 1 + 3 * 3) / mpf(4)),
        ("critic target r=1 gamma=0.9 twins (2,3)", 1 + mpf("0.9") * min(2, 3)),
        ("shaped reward (0.3,0.1) weights 0.5/0.5", mpf("0.5") * mpf("0.3") + mpf("0.5") * mpf("0.1")),
    ]
    for name, value in rows:
        print(f"{name}: {mp.nstr(value, 17)}")


if __name__ == "__main__":
    main()
