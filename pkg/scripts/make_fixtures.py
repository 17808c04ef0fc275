"""Regenerate the JSON fixtures under fixtures/.

Every fixture goes through the validating constructors, so a committed
fixture is a certified algebra (or category) description.
"""
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from kulshammer import algebra as A

FIXDIR = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


def dump(name: str, data: dict):
    path = FIXDIR / name
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    print("wrote", path)


def main():
    FIXDIR.mkdir(exist_ok=True)
    dump("dualnum_p2.json", A.dual_numbers(2).to_json())
    dump("dualnum_p3.json", A.dual_numbers(3).to_json())

    gf2 = A.from_structure_constants(
        {"p": 2, "dim": 1, "labels": ["1"], "unit": [1], "table": [[[1]]], "form": [[1]]}
    )
    dump("gf2.json", gf2.to_json())

    c3 = A.group_algebra([[0, 1, 2], [1, 2, 0], [2, 0, 1]], 3)
    dump("gf3_c3.json", c3.to_json())

    klein = A.group_algebra(
        [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]], 2
    )
    dump("gf2_c2xc2.json", klein.to_json())

    ktimesk = A.from_structure_constants(
        {
            "p": 2,
            "dim": 2,
            "labels": ["e1", "e2"],
            "unit": [1, 1],
            "table": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]],
            "form": [[1, 0], [0, 1]],
        }
    )
    dump("k_times_k.json", ktimesk.to_json())

    local3 = A.monomial_quiver_algebra(
        ["v"],
        [("x", "v", "v"), ("y", "v", "v")],
        [["x", "x"], ["y", "y"], ["x", "y"], ["y", "x"]],
        2,
    )
    dump("local3_p2.json", local3.to_json())

    for p in (2, 3):
        dump(
            f"category_dualnum_p{p}.json",
            {"algebra": A.dual_numbers(p).to_json(), "automorphisms": {"id": None}},
        )


if __name__ == "__main__":
    main()
