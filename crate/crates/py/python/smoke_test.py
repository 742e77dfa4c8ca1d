"""Smoke test for the Python bindings; run after `pip install --no-build-isolation crates/py`."""

import pathlib

import rrcrn_py

GOLDEN = pathlib.Path(__file__).resolve().parents[2] / "core" / "tests" / "golden"


def main():
    parity = rrcrn_py.compile_mod([1], 0, 2)
    assert parity.is_decider and parity.arity == 1
    for x in range(1, 5):
        v = parity.verify([x], cap_extra=4)
        assert v.verdict == "VERIFIED-UP-TO-CAP", v
        assert v.stable_output == ("yes" if x % 2 == 0 else "no")

    both = rrcrn_py.combine(parity, rrcrn_py.compile_threshold([2], 3), "or")
    assert rrcrn_py.complement(both).verify([1], cap_extra=4).stable_output == "yes"

    affine = rrcrn_py.compile_affine(["1/2"], [1], 2)
    v = affine.verify([3], cap_extra=32)
    assert v.verdict == "VERIFIED-UP-TO-CAP" and v.stable_output == "3", v
    assert all(ok for _, ok in affine.check_invariants())

    text = (GOLDEN / "trap.crc").read_text()
    trap = rrcrn_py.Device.parse(text)
    assert trap.to_text() == text
    assert trap.find_linear_invariants() == []
    v = trap.verify([2])
    assert v.verdict == "REFUTED" and v.trap_configuration == {}
    assert trap.replay(v.trap)[-1] == {}
    assert trap.verify([2], model="stable").stable_output == "1"

    try:
        rrcrn_py.compile_mod([1], 0, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("modulus 1 accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
