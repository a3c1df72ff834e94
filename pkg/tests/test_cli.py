from __future__ import annotations

import io
import sys

import pytest

from prodkit import catalog
from prodkit.cli import VERB_OPERATIONS, read_caps, run
from prodkit.finalg import make_product


def invoke(argv):
    out = io.StringIO()
    old = sys.stdout
    sys.stdout = out
    try:
        code = run(argv)
    finally:
        sys.stdout = old
    return code, out.getvalue()


def test_product(alg_file, z2, z3, tmp_path):
    out_path = str(tmp_path / "z6.alg")
    code, out = invoke(["product", alg_file(z2), alg_file(z3), "-o", out_path])
    assert code == 0
    assert "size 6" in out
    from prodkit.finalg import load_algebra

    assert load_algebra(out_path).size == 6


def test_close(alg_file, z4):
    code, out = invoke(["close", alg_file(z4), "-g", "1"])
    assert code == 0
    assert "generates: yes" in out
    assert "closure size 4 of 4" in out


def test_cg(alg_file, z4):
    code, out = invoke(["cg", alg_file(z4), "-p", "0,2"])
    assert code == 0
    assert out.startswith("con 4\n0 1 0 1\n")
    assert "{0,2} {1,3}" in out


def test_quotient(alg_file, z4, tmp_path):
    con_file = tmp_path / "theta.con"
    con_file.write_text("con 4\n0 1 0 1\n")
    out_path = str(tmp_path / "q.alg")
    code, out = invoke(["quotient", alg_file(z4), "-c", str(con_file), "-o", out_path])
    assert code == 0
    assert "4 -> 2 classes" in out
    from prodkit.finalg import load_algebra

    assert load_algebra(out_path).size == 2


def test_quotient_rejects_non_congruence(alg_file, z4, tmp_path):
    con_file = tmp_path / "theta.con"
    con_file.write_text("con 4\n0 0 2 3\n")
    code, _ = invoke(["quotient", alg_file(z4), "-c", str(con_file), "-o", str(tmp_path / "q.alg")])
    assert code == 2


def test_con(alg_file, z4):
    code, out = invoke(["con", alg_file(z4)])
    assert code == 0
    assert "3 congruences" in out
    assert "modular: yes" in out


def test_con_nonmodular(alg_file):
    code, out = invoke(["con", alg_file(catalog.pentagon_unary())])
    assert code == 0
    assert "modular: no" in out


def test_con_plot(alg_file, z4, tmp_path):
    fig = tmp_path / "hasse.png"
    code, out = invoke(["con", alg_file(z4), "--plot", str(fig)])
    assert code == 0
    assert fig.exists() and fig.stat().st_size > 0


def test_gallery_nat_mms_plot(tmp_path):
    fig = tmp_path / "growth.png"
    code, out = invoke(
        ["gallery", "nat-mms", "close", "--gens", "1,1", "--rounds", "3", "--plot", str(fig)]
    )
    assert code == 0
    assert fig.exists() and fig.stat().st_size > 0


def test_malcev(alg_file, z2, c2):
    code, out = invoke(["malcev", alg_file(z2)])
    assert code == 0
    assert "malcev: found" in out
    code, out = invoke(["malcev", alg_file(c2)])
    assert code == 0
    assert "malcev: none" in out


def test_malcev_inconclusive_with_cap(alg_file, z4, monkeypatch):
    monkeypatch.setenv("PRODKIT_CAPS", "clone=2")
    code, out = invoke(["malcev", alg_file(z4)])
    assert code == 1
    assert "inconclusive" in out


def test_idempotent(alg_file, z2, c2):
    assert invoke(["idempotent", alg_file(z2)])[1] == "idempotent: no\n"
    assert invoke(["idempotent", alg_file(c2)])[1] == "idempotent: yes\n"


def test_whitman_pass_and_fail(alg_file, c2):
    code, out = invoke(["whitman", alg_file(c2)])
    assert code == 0 and "holds" in out
    c4 = catalog.chain_lattice(4)
    path = alg_file(make_product(c4, c4), "c4xc4")
    code, out = invoke(["whitman", path, "--decode", "4"])
    assert code == 1
    assert "100 violations" in out
    assert "x=(1,3) y=(3,1) u=(0,2) v=(2,0)" in out


def test_idem_nf():
    code, out = invoke(["idem-nf", "(· x1 x1)"])
    assert code == 0
    assert out == "x1\n"


def test_idem_class():
    code, out = invoke(["idem-class", "(· x1 x2)", "--length-cap", "5"])
    assert code == 0
    assert "class size" in out


def test_kerh():
    code, out = invoke(["kerh", "(· x11 x11)", "x11"])
    assert code == 0 and out == "in kernel: yes\n"
    code, out = invoke(["kerh", "x11", "x22"])
    assert code == 0 and out == "in kernel: no\n"


def test_loop_present_and_nf(alg_file, tmp_path):
    loop_path = alg_file(catalog.cyclic_loop(3))
    pres = str(tmp_path / "z3.pres")
    code, out = invoke(["loop-present", loop_path, "-o", pres])
    assert code == 0
    assert "2 generators, 12 rules" in out
    code, out = invoke(["loop-nf", pres, "(· z1 z1)"])
    assert code == 0 and out == "z2\n"
    code, out = invoke(["loop-nf", pres, "(· 1 z1)"])
    assert code == 0 and out == "z1\n"


def test_commutator_verb(alg_file, z4, klein):
    code, out = invoke(["commutator", alg_file(z4), "--alpha", "0,1", "--beta", "0,1"])
    assert code == 0
    assert "[alpha,beta]: 0 1 2 3" in out
    assert "abelian (beta): yes" in out
    code, out = invoke(["commutator", alg_file(klein), "--alpha", "0,3", "--beta", "0,3"])
    assert code == 0  # the delta construction is not refuted by the term condition
    assert "abelian (beta): yes" in out


def test_diffterm(alg_file, z4):
    code, out = invoke(["diffterm", alg_file(z4), "-t", "(· (· x1 (⁻¹ x2)) x3)"])
    assert code == 0 and "yes" in out
    code, out = invoke(["diffterm", alg_file(z4), "-t", "x1"])
    assert code == 1 and "no" in out


def test_verify_thm22(alg_file, z2, z3):
    code, out = invoke(
        ["verify", "thm22", alg_file(z2), alg_file(z3),
         "--x", "1", "--y", "1", "--a0", "0", "--b0", "0"]
    )
    assert code == 0
    assert "generates: yes" in out
    assert "Z =" in out


def test_verify_thm22_hypothesis_fails(alg_file, z4, z2):
    code, out = invoke(
        ["verify", "thm22", alg_file(z4), alg_file(z2),
         "--x", "2", "--y", "1", "--a0", "0", "--b0", "0"]
    )
    assert code == 1
    assert "hypothesis violated" in out


def test_verify_thm24(alg_file):
    grid = catalog.grid_lattice()
    c2 = catalog.chain_lattice(2)
    code, out = invoke(
        ["verify", "thm24", alg_file(grid), alg_file(c2), "--x", "1,2", "--y", "0,1"]
    )
    assert code == 0
    assert "generates: yes" in out


def test_verify_thm24_nonsurjective(alg_file):
    bad = catalog.zset_surrogate()
    code, out = invoke(
        ["verify", "thm24", alg_file(bad), alg_file(bad), "--x", "0", "--y", "0"]
    )
    assert code == 1
    assert "not surjective" in out


def test_verify_lemma34(alg_file, z2):
    code, out = invoke(["verify", "lemma34", alg_file(z2), alg_file(z2)])
    assert code == 0
    assert "part1 join-decompositions exact: 5/5" in out
    assert "part2 meet-decompositions exact: 5/5" in out


def test_verify_lemma35(alg_file, z4, z2):
    code, out = invoke(
        ["verify", "lemma35", alg_file(z4), alg_file(z2),
         "--x", "1", "--a0", "0", "--b0", "0"]
    )
    assert code == 0
    assert "cg(pairs) == 1_A x 0_B: yes" in out


def test_verify_prop39(alg_file, z2, z3):
    code, out = invoke(
        ["verify", "prop39", alg_file(z2), alg_file(z3), "--trials", "5", "--seed", "3"]
    )
    assert code == 0
    assert "prop39: 5/5 exact" in out


def test_verify_thm42(alg_file, z4, z2):
    code, out = invoke(
        ["verify", "thm42", alg_file(z4), alg_file(z2), "-a", "0,1"]
    )
    assert code == 0
    assert "separates: yes" in out
    code, out = invoke(
        ["verify", "thm42", alg_file(z4), alg_file(z2), "-a", "0,1",
         "--provider", "random", "--seed", "5"]
    )
    assert code == 0
    assert "separates: yes" in out


def test_gallery_verbs():
    code, out = invoke(["gallery", "nat-mms", "close", "--gens", "1,1;1,3", "--rounds", "6"])
    assert code == 0
    assert "spread M = 2" in out
    assert "probe (0, 3) absent: yes" in out

    code, out = invoke(["gallery", "f2-gset", "check", "--radius", "2"])
    assert code == 0
    assert "0 violations" in out and "0 missing" in out

    code, out = invoke(["gallery", "squarefree", "mul", "ab", "ba"])
    assert code == 0 and out == "0\n"

    code, out = invoke(["gallery", "zx", "check", "--dim", "2", "--pairs", "1,0|0,1"])
    assert code == 0
    assert "proper subgroup: yes" in out


def test_exit_code_2_on_usage():
    assert invoke(["frobnicate"])[0] == 2
    assert invoke(["close", "/nonexistent/file.alg", "-g", "1"])[0] == 2
    assert invoke(["cg"])[0] == 2


def test_exit_code_2_on_bad_format(tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("algebra x\nsize 2\nop f 1\n0 7\n")
    assert invoke(["idempotent", str(bad)])[0] == 2


def test_caps_parsing(monkeypatch):
    monkeypatch.setenv("PRODKIT_CAPS", "elements=1000,clone=50,class=10")
    caps = read_caps()
    assert caps.elements == 1000
    assert caps.clone == 50
    assert caps.klass == 10


def test_caps_rejects_unknown_key(monkeypatch):
    monkeypatch.setenv("PRODKIT_CAPS", "bogus=1")
    from prodkit.cli import UsageError

    with pytest.raises(UsageError):
        read_caps()


SPEC_OPERATIONS = {
    # terms
    "terms.parse_term", "terms.term_length", "terms.evaluate_term",
    "terms.substitute", "terms.format_term",
    # finalg
    "finalg.make_product", "finalg.make_quotient", "finalg.is_idempotent",
    "finalg.unary_clone", "finalg.kary_clone", "finalg.find_malcev",
    # generation
    "generation.close", "generation.generates", "generation.malcev_genset",
    "generation.surjective_clone_genset", "generation.bounded_close",
    # congruences
    "congruences.cg", "congruences.con_all", "congruences.con_join",
    "congruences.con_meet", "congruences.is_modular_conlattice",
    "congruences.product_join_tau", "congruences.product_meet_sigma",
    "congruences.as_product_congruence", "congruences.min_product_above",
    "congruences.commutator", "congruences.term_condition_check",
    "congruences.is_abelian_congruence", "congruences.check_difference_term",
    "congruences.cm_kernel_genset", "congruences.separate_in_factor",
    # presentations
    "presentations.idem_nf", "presentations.ker_h_member",
    "presentations.bounded_class", "presentations.loop_reduce",
    "presentations.closed_presentation_from_loop", "presentations.whitman_check",
    # gallery
    "gallery.nat_mms", "gallery.f2_gset", "gallery.gset_product_check",
    "gallery.squarefree_mul", "gallery.zx_invariant_check",
}


def test_every_operation_reachable_from_a_verb():
    covered = set()
    for ops in VERB_OPERATIONS.values():
        covered |= set(ops)
    missing = SPEC_OPERATIONS - covered
    assert not missing, f"operations with no CLI verb: {sorted(missing)}"


def test_dispatch_table_matches_parser():
    from prodkit.cli import build_parser

    build_parser()  # construction itself validates the argparse wiring
    for verb in VERB_OPERATIONS:
        assert verb.split()[0] in {
            "product", "close", "cg", "quotient", "con", "malcev", "idempotent", "whitman",
            "idem-nf", "idem-class", "kerh", "loop-present", "loop-nf",
            "commutator", "diffterm", "verify", "gallery",
        }
