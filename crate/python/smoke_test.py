"""Smoke test for the diagcat Python extension.

Build first:  pip install --no-build-isolation -e crates/python
Run:          python python/smoke_test.py
"""

import json

import diagcat_py as dc


def main() -> None:
    sym = dc.Character.preset("sym")
    assert sym.params == ["t"]
    assert sym.evaluate(sym.loop_diagram()) == "t"

    # the two (1,1) partitions of S_t: identity and the split-merge
    assert dc.hom_dimension("sym", 1, 1) == 2
    assert dc.hom_dimension("sym", 2, 2) == 15
    assert dc.hom_dimension("sym", 1, 1, ["0"]) == 0
    assert dc.hom_dimension("gl", 3, 3) == 6
    assert dc.hom_dimension("orth", 2, 2, ["1"]) == 1

    gl = dc.Character.preset("gl")
    swap = gl.parse("boxes: []; wires: [(bnd.in[1], bnd.out[0]), (bnd.in[0], bnd.out[1])]; in: 2; out: 2")
    ident = swap.compose(swap)
    assert gl.evaluate(ident.trace_close()) == "t^2"
    assert gl.evaluate(swap.trace_close()) == "t"
    assert gl.gram([swap], [ident]) == [["t"]]

    line = dc.Character.frobenius(["1/5", "1", "5", "25", "125", "625"])
    assert line.evaluate(line.loop_diagram()) is not None

    report = dc.loyal(["1", "2", "0", "0", "0", "0", "0", "0"])
    assert report["loyal"] and not report["fit"]["good"], report

    code, text = dc.run_config(json.dumps({
        "command": "homdims", "preset": "gl", "t": ["generic", "1"],
        "cutoffs": {"pq_list": [[2, 2]]}, "format": "csv",
    }))
    assert code == 0 and text == "p,q,generic,1\n2,2,2,1\n", text

    assert dc.normalize_rational("4/6") == "2/3"
    print("diagcat_py smoke test passed")


if __name__ == "__main__":
    main()
