"""Smoke test for the ahlab extension module.

Build and install first:  pip install --no-build-isolation crates/python
"""

import json

import ahlab


def main():
    # plane quartics through five double points: one conic squared too many
    r = ahlab.hilbert(2, 4, 5)
    assert (r.computed, r.expected, r.defect) == (14, 15, 1), r
    assert r.verdict == "defective-evidence"
    assert ahlab.is_exception(2, 4, 5)
    assert not ahlab.is_exception(3, 6, 21)

    r = ahlab.hilbert(3, 6, 21, field="q")
    assert r.computed == 84 and r.verdict == "fills", r
    assert r.to_dict()["case"] == {"n": 3, "d": 6, "k": 21}

    # seven double points in P^4 on cubics
    assert ahlab.hilbert(4, 3, 7).defect == 1

    lo, hi = ahlab.critical_k(4, 4)
    assert (lo, hi) == (14, 14)

    scheme = {"n": 2, "components": [{"type": "double", "point": ["1", "0", "0"]}]}
    assert ahlab.hilbert_scheme(json.dumps(scheme), 2).computed == 3

    cert = ahlab.Certificate(3, 6, 21)
    check = cert.check()
    assert check["accepted"], check
    again = ahlab.Certificate.from_json(cert.to_json())
    assert len(again) == len(cert)

    w = ahlab.exception_witness(2, 4, 5)
    assert w["verified"] and w["ideal_dim"] == 1

    f = ahlab.BinaryForm([2, 1, 1, 1, 1, 2])
    assert f.d == 5 and f.hankel_rank() == 3
    assert f.in_secant(3) and not f.in_secant(2)
    terms = f.decompose()
    forms = sorted((round(a.real, 9), round(b.real, 9)) for _, (a, b) in terms)
    assert forms == [(0.0, 1.0), (1.0, 0.0), (1.0, 1.0)], terms
    assert ahlab.BinaryForm(["1/2", "-3", 0, 1]).a == ["1/2", "-3", "0", "1"]

    rows = ahlab.sweep(1, 3, 2, 4)
    assert rows and all(row["agrees"] for row in rows)

    try:
        ahlab.hilbert(2, 2, 1, field="bogus")
    except ValueError:
        pass
    else:
        raise AssertionError("bad field accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
