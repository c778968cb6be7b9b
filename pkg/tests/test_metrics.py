import dataclasses
import math

from methodlens.java_extract import MethodDeclaration, extract_methods, normalize_source
from methodlens.metrics import (
    HalsteadCounts,
    byte_entropy,
    compute_counts,
    compute_fanout,
    compute_halstead,
    compute_indent_std,
    compute_max_block_depth,
    compute_mccabe,
    compute_mcclure,
    compute_metric_vector,
    compute_readability_buse,
    compute_readability_posnett,
    compute_size,
    detect_getter_setter,
    compute_maintainability_index,
)


def decl_of(source, name=None, path="T.java"):
    if "class" not in source and "interface" not in source and "enum" not in source:
        source = "class T {\n" + source + "\n}\n"
    decls = extract_methods(normalize_source(path, source))
    if name is not None:
        return next(d for d in decls if d.name == name)
    return decls[0]


def raw_decl(body_text, name="m", params=(), modifiers=()):
    return MethodDeclaration(
        name=name,
        parameterTypes=list(params),
        modifiers=set(modifiers),
        annotations=[],
        bodyText=body_text,
        startLine=1,
        endLine=body_text.count("\n") + 1,
        containerChain=["T"],
    )


GETTER = """\
class A {
    int getX() {
        return x;
    }
}
"""


# --- size ---------------------------------------------------------------

def test_size_three_line_getter():
    assert compute_size(decl_of(GETTER)) == 3


def test_size_blank_body_lines_not_counted():
    d = decl_of("void m() {\n\n\n}")
    assert compute_size(d) == 2  # declaration line + closing brace line


def test_size_ignores_comment_only_lines():
    plain = decl_of("void m() {\n    go();\n}")
    commented = decl_of("void m() {\n    // note\n    go();\n}")
    assert compute_size(plain) == compute_size(commented) == 3


# --- mccabe ---------------------------------------------------------------

def test_mccabe_empty_body():
    assert compute_mccabe(decl_of("void m() { }")) == 1


def test_mccabe_if_with_short_circuit():
    d = decl_of("void m() { if (a && b) { go(); } }")
    assert compute_mccabe(d) == 3


def test_mccabe_switch_cases_without_default():
    d = decl_of(
        "void m() { switch (x) { case 1: a(); break; case 2: b(); break; "
        "case 3: c(); break; default: d(); } }"
    )
    assert compute_mccabe(d) == 4


def test_mccabe_do_while_counts_once():
    d = decl_of("void m() { do { a(); } while (x < 3); }")
    assert compute_mccabe(d) == 2


def test_mccabe_wildcard_question_mark_not_ternary():
    d = decl_of("void m(java.util.List<?> xs) { int y = a > 0 ? 1 : 2; }")
    assert compute_mccabe(d) == 2


# --- mcclure ---------------------------------------------------------------

def test_mcclure_no_conditionals():
    assert compute_mcclure(decl_of("void m() { go(); }")) == (0, 0)


def test_mcclure_two_vars_two_comparisons():
    d = decl_of("void m() { if (x > 0 && x < n) { go(); } }")
    assert compute_mcclure(d) == (2, 2)


def test_mcclure_flag_only():
    d = decl_of("void m() { while (flag) { spin(); } }")
    assert compute_mcclure(d) == (1, 0)


def test_mcclure_for_condition_clause_only():
    d = decl_of("void m() { for (int i = 0; i < limit; i++) { go(i); } }")
    nvar, ncomp = compute_mcclure(d)
    assert (nvar, ncomp) == (2, 1)  # i and limit; the init/update do not count


# --- indentation ---------------------------------------------------------------

def test_indent_std_uniform_is_zero():
    d = raw_decl("    a();\n    b();\n    c();")
    assert compute_indent_std(d) == 0.0


def test_indent_std_closed_form():
    d = raw_decl("void m() {\n    a();\n    b();\n}")
    assert compute_indent_std(d) == 2.0  # widths [0, 4, 4, 0]


def test_indent_tabs_equal_four_spaces():
    tabs = raw_decl("void m() {\n\ta();\n}")
    spaces = raw_decl("void m() {\n    a();\n}")
    assert compute_indent_std(tabs) == compute_indent_std(spaces)


# --- nesting depth ---------------------------------------------------------------

def test_depth_straight_line():
    assert compute_max_block_depth(decl_of("void m() { a(); b(); }")) == 0


def test_depth_if_inside_for():
    d = decl_of("void m() { for (int i = 0; i < n; i++) { if (ok(i)) { go(i); } } }")
    assert compute_max_block_depth(d) == 2


def test_depth_try_catch_top_level():
    d = decl_of("void m() { try { a(); } catch (Exception e) { b(); } }")
    assert compute_max_block_depth(d) == 1


def test_depth_braceless_bodies_count():
    d = decl_of("void m() { if (a) if (b) go(); }")
    assert compute_max_block_depth(d) == 2


def test_depth_else_if_chain_stays_level():
    d = decl_of("void m() { if (a) { x(); } else if (b) { y(); } else { z(); } }")
    assert compute_max_block_depth(d) == 1


# --- fanout ---------------------------------------------------------------

def test_fanout_no_calls():
    assert compute_fanout(decl_of("void m() { int x = 1; }")) == 0


def test_fanout_distinct_names():
    d = decl_of("void m() { a.foo(); b.foo(); bar(); }")
    assert compute_fanout(d) == 2


def test_fanout_recursive_self_call():
    d = decl_of("void m() { m(); }")
    assert compute_fanout(d) == 1


def test_fanout_excludes_constructor_calls():
    d = decl_of("void m() { Foo f = new Foo(); f.run(); new a.b.Bar(); }")
    assert compute_fanout(d) == 1


# --- halstead ---------------------------------------------------------------

def test_halstead_bare_return():
    h = compute_halstead(decl_of("void m() { return; }"))
    assert (h.N1, h.N2, h.length) == (2, 0, 2)  # 'return' and the body braces


def test_halstead_return_operand():
    h = compute_halstead(decl_of("void m() { return x; }"))
    assert (h.length, h.n1, h.n2) == (3, 2, 1)


def test_halstead_zero_length_volume():
    assert HalsteadCounts(0, 0, 0, 0).volume == 0.0


def test_halstead_invocation_absorbs_parens():
    h = compute_halstead(decl_of("void m() { go(x); }"))
    # operators: {}, go(); operands: x
    assert (h.N1, h.N2) == (2, 1)
    assert h.n1 == 2


# --- maintainability index ---------------------------------------------------------------

def test_mi_low_volume_floor():
    h = HalsteadCounts(1, 0, 1, 0)  # volume = 1
    assert abs(compute_maintainability_index(1, 1, h) - 170.77) < 1e-9


def test_mi_direct_evaluation():
    class _H:
        volume = 100.0
    expected = 171 - 5.2 * math.log(100) - 0.23 * 5 - 16.2 * math.log(20)
    assert abs(compute_maintainability_index(20, 5, _H()) - expected) < 1e-12
    assert abs(expected - 97.37) < 0.01


def test_mi_decreases_with_size():
    class _H:
        volume = 50.0
    values = [compute_maintainability_index(s, 3, _H()) for s in (5, 10, 40)]
    assert values == sorted(values, reverse=True)


# --- readability (line-shape surrogate) ------------------------------------------

def test_buse_score_in_open_interval():
    for src in (GETTER, "void m() { }", "void m() {\n" + "    x(y, z);\n" * 30 + "}"):
        score = compute_readability_buse(decl_of(src))
        assert 0.0 < score < 1.0


def test_buse_doubling_line_lengths_decreases_score():
    d = decl_of(GETTER)
    padded = "\n".join(line + " " * len(line) for line in d.bodyText.split("\n"))
    d2 = dataclasses.replace(d, bodyText=padded)
    assert compute_readability_buse(d2) < compute_readability_buse(d)


def test_buse_adding_comment_line_does_not_decrease_score():
    d = decl_of(GETTER)
    with_comment = dataclasses.replace(
        d, bodyText=d.bodyText + "\n    // note", endLine=d.endLine + 1
    )
    assert compute_readability_buse(with_comment) >= compute_readability_buse(d)


# --- readability (entropy model) ------------------------------------------

def test_posnett_score_in_open_interval():
    d = decl_of(GETTER)
    h = compute_halstead(d)
    assert 0.0 < compute_readability_posnett(d, h) < 1.0


def test_posnett_volume_increase_decreases_score():
    d = decl_of(GETTER)
    small = HalsteadCounts(5, 5, 3, 3)
    large = HalsteadCounts(200, 200, 30, 30)
    assert compute_readability_posnett(d, large) < compute_readability_posnett(d, small)


def test_entropy_of_single_character_is_zero():
    assert byte_entropy("a") == 0.0


# --- parameters / variables / comment ratio -------------------------------

def test_counts_multi_declarator():
    d = decl_of("void m() { int a, b; use(a, b); }")
    assert compute_counts(d)[1] == 2


def test_counts_comment_ratio():
    d = decl_of("void m() {\n    // one\n    // two\n    init();\n    go();\n}")
    params, variables, ratio = compute_counts(d)
    assert compute_size(d) == 4
    assert ratio == 0.5


def test_counts_parameterless():
    assert compute_counts(decl_of("void m() { }"))[0] == 0


def test_counts_for_init_and_resources_included_catch_excluded():
    d = decl_of(
        "void m() {\n"
        "    for (int i = 0, j = 0; i < j; i++) { }\n"
        "    try (Res r = open()) { } catch (Exception boom) { }\n"
        "    for (String s : items) { }\n"
        "}"
    )
    assert compute_counts(d)[1] == 4  # i, j, r, s


def test_counts_lambda_parameters_excluded():
    d = decl_of("void m() { items.forEach(x -> consume(x)); int kept = 1; }")
    assert compute_counts(d)[1] == 1


# --- getter/setter ---------------------------------------------------------------

def test_getter_detected():
    assert detect_getter_setter(decl_of("int getX(){ return x; }")) is True


def test_setter_with_extra_statement_rejected():
    assert detect_getter_setter(decl_of("void setX(int v){ x = v; log(); }")) is False


def test_is_prefix_getter_with_comparison():
    assert detect_getter_setter(decl_of("boolean isEmpty(){ return size == 0; }")) is True


def test_plain_setter_detected():
    assert detect_getter_setter(decl_of("void setX(int v){ this.x = v; }")) is True


# --- full vector ---------------------------------------------------------------

def test_vector_for_canonical_getter():
    v = compute_metric_vector(decl_of(GETTER))
    assert v.size == 3
    assert v.mccabe == 1
    assert v.getterSetter is True
    assert v.isPublic is False
    assert v.parameters == 0
    assert v.maxBlockDepth == 0


def test_vector_path_independence_and_determinism():
    a = compute_metric_vector(decl_of(GETTER, path="x/A.java"))
    b = compute_metric_vector(decl_of(GETTER, path="y/B.java"))
    assert a == b


def test_comment_append_changes_only_comment_sensitive_fields():
    d = decl_of(GETTER)
    d2 = dataclasses.replace(d, bodyText=d.bodyText + "\n    // trailing", endLine=d.endLine + 1)
    v1, v2 = compute_metric_vector(d), compute_metric_vector(d2)
    for field in ("size", "mccabe", "nvar", "ncomp", "fanout", "halsteadLength",
                  "parameters", "variables", "maintainabilityIndex", "maxBlockDepth"):
        assert getattr(v1, field) == getattr(v2, field), field
    assert v2.commentRatio > v1.commentRatio


def test_comment_ratio_times_size_is_integral():
    d = decl_of("void m() {\n    // one\n    /* two\n       three */\n    go();\n}")
    v = compute_metric_vector(d)
    product = v.commentRatio * v.size
    assert abs(product - round(product)) < 1e-12
