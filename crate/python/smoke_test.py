"""Quick check that the extension module loads and agrees with known values."""

import json
from pathlib import Path

import logfano


def main() -> None:
    s = logfano.Surface.blown_up_f1()
    assert s.intersect(["1", "0", "-1"], ["1", "0", "-1"]) == "0"
    assert s.volume(["2", "1", "-1"]) == "7"

    p = s.profile()
    assert p.tau["value"] == "2"
    assert p.volume_at("1/2") == "5"
    e = p.eta("1/2")
    assert e["value"]["value"] == "-5/6", e
    assert e["verdict"] == "NOT_LOG_K_SEMISTABLE"

    pieces = p.eta_polynomial()["pieces"]
    assert pieces[0]["poly"] == ["-4/3", "0", "2"], pieces

    d = p.destabilizing_betas()
    hi = d["intervals"][0]["hi"]
    assert abs(float(hi["decimal_hint"]) - 0.8165) < 1e-3

    plane = logfano.Surface.projective_plane().profile()
    assert plane.eta("1")["value"]["value"] == "0"
    assert logfano.eta_closed_form(2, "3", "4", "1/2") == "-4/3"

    rays = [(1, 0), (0, 1), (-1, 1), (0, -1), (1, -1)]
    assert logfano.count_sections(rays, ["1"] * 5) == 8

    root = Path(__file__).resolve().parent.parent
    doc = (root / "crates/core/tests/data/blown_up_f1.json").read_text()
    report = logfano.run(doc)
    assert report["evaluations"][0]["df"]["df_value"] == "-50/3"

    bad = json.loads(doc)
    bad["beta"] = "3/2"
    assert any("$.beta" in m for m in logfano.validate(json.dumps(bad)))

    print("smoke test passed")


if __name__ == "__main__":
    main()
