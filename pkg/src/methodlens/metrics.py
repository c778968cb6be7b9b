"""The 17 method-level code metrics, computed from a method's declaration text.

Every convention that is not forced by the metric's usual definition
(Halstead operator/operand classification, the predicate set, tab width,
readability model weights, ...) is frozen in docs/metric_ledger.md so the
golden fixtures stay stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .java_extract import (
    MethodDeclaration,
    PRIMITIVE_TYPES,
    Token,
    tokenize,
)

METRIC_NAMES = [
    "size", "mccabe", "nvar", "ncomp", "indentStd", "maxBlockDepth", "fanout",
    "halsteadLength", "maintainabilityIndex", "readability", "simpleReadability",
    "parameters", "variables", "commentRatio", "getterSetter", "isPublic", "isStatic",
]

# Binary flags carry too little spread to contribute to composite scores.
NUMERIC_METRIC_NAMES = METRIC_NAMES[:14]

TAB_WIDTH = 4

# Readability surrogate: logistic over eight shape features, weights frozen
# in the metric ledger.  Intercept centers typical small methods near 0.6.
BUSE_INTERCEPT = 2.3
BUSE_WEIGHTS = (
    ("avgLineLength", -0.03),
    ("maxLineLength", -0.01),
    ("avgIdentifierLength", -0.05),
    ("identifiersPerLine", -0.12),
    ("avgIndent", -0.06),
    ("commentLineRatio", 1.2),
    ("blankLineRatio", 0.25),
    ("parensPerLine", -0.30),
)

POSNETT_INTERCEPT = 8.87
POSNETT_VOLUME_COEF = -0.033
POSNETT_LINES_COEF = 0.40
POSNETT_ENTROPY_COEF = -1.5


@dataclass(frozen=True)
class HalsteadCounts:
    N1: int  # total operators
    N2: int  # total operands
    n1: int  # distinct operators
    n2: int  # distinct operands

    @property
    def length(self) -> int:
        return self.N1 + self.N2

    @property
    def vocabulary(self) -> int:
        return self.n1 + self.n2

    @property
    def volume(self) -> float:
        return self.length * math.log2(max(self.vocabulary, 2))


@dataclass(frozen=True)
class MetricVector:
    size: int
    mccabe: int
    nvar: int
    ncomp: int
    indentStd: float
    maxBlockDepth: int
    fanout: int
    halsteadLength: int
    maintainabilityIndex: float
    readability: float
    simpleReadability: float
    parameters: int
    variables: int
    commentRatio: float
    getterSetter: bool
    isPublic: bool
    isStatic: bool

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def as_floats(self) -> list[float]:
        return [float(getattr(self, name)) for name in METRIC_NAMES]


# ---------------------------------------------------------------------------
# token helpers


def _logistic(z: float) -> float:
    z = max(-30.0, min(30.0, z))  # keep the result strictly inside (0, 1)
    return 1.0 / (1.0 + math.exp(-z))


def _match_forward(toks: list[Token], i: int, open_txt: str, close_txt: str) -> int:
    """Index of the token closing toks[i] (which must be the opener)."""
    depth = 0
    for j in range(i, len(toks)):
        t = toks[j].text
        if t == open_txt:
            depth += 1
        elif t == close_txt:
            depth -= 1
            if depth == 0:
                return j
    return len(toks) - 1


def _body_open_index(toks: list[Token]) -> int | None:
    """Index of the '{' that opens the method body (annotation argument
    groups in the header are skipped)."""
    i = 0
    n = len(toks)
    while i < n:
        t = toks[i]
        if t.text == "@":
            i += 1
            while i < n and (toks[i].kind == "identifier" or toks[i].text == "."):
                i += 1
            if i < n and toks[i].text == "(":
                i = _match_forward(toks, i, "(", ")") + 1
            continue
        if t.text == "{":
            return i
        i += 1
    return None


def _declaration_tokens(decl: MethodDeclaration) -> list[Token]:
    return tokenize(decl.bodyText)


def _body_slice(toks: list[Token]) -> list[Token]:
    """Tokens of the body block, outer braces included (empty when absent)."""
    code = [t for t in toks if t.kind != "comment"]
    open_idx = _body_open_index(code)
    if open_idx is None:
        return []
    close_idx = _match_forward(code, open_idx, "{", "}")
    return code[open_idx:close_idx + 1]


def _invocation_indices(toks: list[Token]) -> set[int]:
    """Indices of identifiers in call position: name directly followed by '(',
    excluding constructor calls after `new`, annotation names, and
    declaration-shaped `Type name(` positions."""
    calls: set[int] = set()
    n = len(toks)
    for i, t in enumerate(toks):
        if t.kind != "identifier" or i + 1 >= n or toks[i + 1].text != "(":
            continue
        if i > 0:
            prev = toks[i - 1]
            if prev.kind == "identifier":
                continue
            if prev.text in ("]", ">", ">>", ">>>", "@"):
                continue
            if prev.kind == "keyword" and (prev.text in PRIMITIVE_TYPES or prev.text == "new"):
                continue
            if prev.text == ".":
                j = i - 1
                while j >= 1 and toks[j].text == "." and toks[j - 1].kind == "identifier":
                    j -= 2
                if j >= 0 and toks[j].text == "new":
                    continue
        calls.add(i)
    return calls


def _is_ternary_question(toks: list[Token], i: int) -> bool:
    """'?' is a ternary operator unless it sits in a generic wildcard slot."""
    if i == 0:
        return False
    prev = toks[i - 1]
    return prev.kind in ("identifier", "literal") or prev.text in (")", "]")


def _ternary_condition(toks: list[Token], i: int) -> list[Token]:
    """Tokens of the condition expression ending at the ternary '?' at i.

    Walks left at the same bracket depth until a boundary token: the start
    of the enclosing group, an assignment, a statement break, or another
    ternary operator.
    """
    boundary_texts = {",", ";", "{", "}", "?", ":", "->", "="}
    assignment_ops = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}
    boundary_keywords = {"return", "throw", "case", "assert", "yield"}
    depth = 0
    j = i - 1
    start = 0
    while j >= 0:
        t = toks[j]
        txt = t.text
        if txt in (")", "]"):
            depth += 1
        elif txt in ("(", "["):
            depth -= 1
            if depth < 0:
                start = j + 1
                break
        elif depth == 0:
            if txt in boundary_texts or txt in assignment_ops or (
                t.kind == "keyword" and t.text in boundary_keywords
            ):
                start = j + 1
                break
        j -= 1
    return toks[start:i]


def _predicate_expressions(body: list[Token]) -> list[list[Token]]:
    """Decision expressions: if/while/do conditions, the for condition
    clause, switch selectors, and ternary conditions."""
    out: list[list[Token]] = []
    n = len(body)
    i = 0
    while i < n:
        t = body[i]
        if t.kind == "keyword" and t.text in ("if", "while", "switch") and i + 1 < n and body[i + 1].text == "(":
            close = _match_forward(body, i + 1, "(", ")")
            out.append(body[i + 2:close])
            i = close + 1
            continue
        if t.kind == "keyword" and t.text == "for" and i + 1 < n and body[i + 1].text == "(":
            close = _match_forward(body, i + 1, "(", ")")
            inner = body[i + 2:close]
            semis = []
            depth = 0
            for k, tok in enumerate(inner):
                if tok.text in ("(", "["):
                    depth += 1
                elif tok.text in (")", "]"):
                    depth -= 1
                elif tok.text == ";" and depth == 0:
                    semis.append(k)
            if len(semis) >= 2:
                out.append(inner[semis[0] + 1:semis[1]])
            i = close + 1
            continue
        if t.text == "?" and _is_ternary_question(body, i):
            out.append(_ternary_condition(body, i))
        i += 1
    return out


# ---------------------------------------------------------------------------
# individual metrics


def compute_size(decl: MethodDeclaration) -> int:
    """Lines in the declaration span carrying at least one non-comment token."""
    marked: set[int] = set()
    for t in _declaration_tokens(decl):
        if t.kind == "comment":
            continue
        marked.update(range(t.line, t.line + t.line_count))
    return len(marked)


def _comment_line_count(toks: list[Token]) -> int:
    marked: set[int] = set()
    for t in toks:
        if t.kind == "comment":
            marked.update(range(t.line, t.line + t.line_count))
    return len(marked)


def compute_mccabe(decl: MethodDeclaration) -> int:
    """1 + #predicates.

    Predicates: if, for, while (a do-while is counted once, through its
    closing while), case labels, catch clauses, ternary '?', and every
    '&&'/'||'.  'default' labels do not count.
    """
    body = _body_slice(_declaration_tokens(decl))
    count = 0
    for i, t in enumerate(body):
        if t.kind == "keyword" and t.text in ("if", "for", "while", "case", "catch"):
            count += 1
        elif t.text in ("&&", "||"):
            count += 1
        elif t.text == "?" and _is_ternary_question(body, i):
            count += 1
    return 1 + count


def compute_mcclure(decl: MethodDeclaration) -> tuple[int, int]:
    """(nvar, ncomp): distinct identifiers and comparison operators inside
    decision expressions."""
    body = _body_slice(_declaration_tokens(decl))
    names: set[str] = set()
    comparisons = 0
    for expr in _predicate_expressions(body):
        for t in expr:
            if t.kind == "identifier":
                names.add(t.text)
            elif t.text in ("==", "!=", "<", "<=", ">", ">="):
                comparisons += 1
            elif t.kind == "keyword" and t.text == "instanceof":
                comparisons += 1
    return len(names), comparisons


def _indent_width(line: str) -> int:
    width = 0
    for ch in line:
        if ch == " ":
            width += 1
        elif ch == "\t":
            width += TAB_WIDTH
        else:
            break
    return width


def compute_indent_std(decl: MethodDeclaration) -> float:
    """Population standard deviation of leading-indent width over non-blank
    lines (tab counts as four spaces)."""
    widths = [_indent_width(line) for line in decl.bodyText.split("\n") if line.strip()]
    if not widths:
        return 0.0
    mean = sum(widths) / len(widths)
    var = sum((w - mean) ** 2 for w in widths) / len(widths)
    return math.sqrt(var)


_CONTROL_KEYWORDS = ("if", "for", "while", "do", "switch", "try", "synchronized")


def compute_max_block_depth(decl: MethodDeclaration) -> int:
    """Deepest nesting of control-structure blocks; the method body itself is
    depth 0 and braceless single-statement bodies count as blocks."""
    body = _body_slice(_declaration_tokens(decl))
    if len(body) < 2:
        return 0
    return _scan_statements(body, 1, len(body) - 1, 0)


def _scan_statements(toks: list[Token], i: int, end: int, depth: int) -> int:
    best = 0
    while i < end:
        i, m = _scan_statement(toks, i, end, depth)
        best = max(best, m)
    return best


def _skip_paren_group(toks: list[Token], i: int, end: int) -> int:
    if i < end and toks[i].text == "(":
        return min(_match_forward(toks, i, "(", ")") + 1, end)
    return i


def _scan_statement(toks: list[Token], i: int, end: int, depth: int) -> tuple[int, int]:
    """Consume one statement starting at i; returns (next index, max control
    depth reached)."""
    if i >= end:
        return end, 0
    t = toks[i]
    txt = t.text

    if txt == ";":
        return i + 1, 0
    if txt == "{":
        close = _match_forward(toks, i, "{", "}")
        m = _scan_statements(toks, i + 1, min(close, end), depth)
        return min(close + 1, end), m

    if t.kind == "keyword":
        if txt == "if":
            j = _skip_paren_group(toks, i + 1, end)
            j, m1 = _scan_embedded(toks, j, end, depth)
            best = m1
            if j < end and toks[j].text == "else":
                j += 1
                if j < end and toks[j].text == "if":
                    j, m2 = _scan_statement(toks, j, end, depth)  # else-if stays level
                else:
                    j, m2 = _scan_embedded(toks, j, end, depth)
                best = max(best, m2)
            return j, best
        if txt in ("for", "while", "switch", "synchronized"):
            j = _skip_paren_group(toks, i + 1, end)
            return _scan_embedded(toks, j, end, depth)
        if txt == "do":
            j, m = _scan_embedded(toks, i + 1, end, depth)
            if j < end and toks[j].text == "while":
                j = _skip_paren_group(toks, j + 1, end)
                if j < end and toks[j].text == ";":
                    j += 1
            return j, m
        if txt == "try":
            j = _skip_paren_group(toks, i + 1, end)
            j, best = _scan_embedded(toks, j, end, depth)
            while j < end and toks[j].kind == "keyword" and toks[j].text in ("catch", "finally"):
                kw = toks[j].text
                j += 1
                if kw == "catch":
                    j = _skip_paren_group(toks, j, end)
                j, m = _scan_embedded(toks, j, end, depth)
                best = max(best, m)
            return j, best
        if txt in ("case", "default"):
            j = i + 1
            while j < end and toks[j].text not in (":", "->"):
                j += 1
            return min(j + 1, end), 0
        if txt in ("class", "interface", "enum"):
            j = i + 1
            while j < end and toks[j].text != "{":
                j += 1
            if j < end:
                close = _match_forward(toks, j, "{", "}")
                m = _scan_statements(toks, j + 1, min(close, end), depth)
                return min(close + 1, end), m
            return end, 0
        if txt == "else":  # stray else (defensive)
            return _scan_embedded(toks, i + 1, end, depth)

    # label
    if t.kind == "identifier" and i + 1 < end and toks[i + 1].text == ":":
        return i + 2, 0

    # expression or declaration statement: run to ';' at group depth 0,
    # descending into any brace bodies (lambdas, anonymous classes, array
    # initializers) which are depth-transparent.
    best = 0
    group = 0
    j = i
    while j < end:
        e = toks[j].text
        if e in ("(", "["):
            group += 1
        elif e in (")", "]"):
            group -= 1
        elif e == "{":
            close = _match_forward(toks, j, "{", "}")
            best = max(best, _scan_statements(toks, j + 1, min(close, end), depth))
            j = close
        elif e == ";" and group <= 0:
            return j + 1, best
        elif e == "}" and group <= 0:
            return j, best  # malformed statement; let the caller see '}'
        j += 1
    return end, best


def _scan_embedded(toks: list[Token], i: int, end: int, depth: int) -> tuple[int, int]:
    """Body of a control structure: a block or a single statement, at
    depth + 1."""
    if i >= end:
        return end, depth + 1
    if toks[i].text == "{":
        close = _match_forward(toks, i, "{", "}")
        inner = _scan_statements(toks, i + 1, min(close, end), depth + 1)
        return min(close + 1, end), max(depth + 1, inner)
    j, inner = _scan_statement(toks, i, end, depth + 1)
    return j, max(depth + 1, inner)


def compute_fanout(decl: MethodDeclaration) -> int:
    """Distinct invoked method simple names in the body."""
    body = _body_slice(_declaration_tokens(decl))
    calls = _invocation_indices(body)
    return len({body[i].text for i in calls})


def compute_halstead(decl: MethodDeclaration) -> HalsteadCounts:
    """Operator/operand counts over the body block (outer braces included).

    Operands: identifiers and literals.  Operators: keywords, operator
    symbols, one per bracket pair, and one per invocation (the called name
    absorbs its parentheses).  ';', ',' and other separators are ignored.
    """
    body = _body_slice(_declaration_tokens(decl))
    calls = _invocation_indices(body)
    consumed_parens = {i + 1 for i in calls}
    operators: list[str] = []
    operands: list[str] = []
    for i, t in enumerate(body):
        if t.kind == "keyword":
            operators.append(t.text)
        elif t.kind == "operator":
            operators.append(t.text)
        elif t.kind == "identifier":
            if i in calls:
                operators.append(t.text + "()")
            else:
                operands.append(t.text)
        elif t.kind == "literal":
            operands.append(t.text)
        elif t.kind == "separator":
            if t.text == "(" and i not in consumed_parens:
                operators.append("()")
            elif t.text == "[":
                operators.append("[]")
            elif t.text == "{":
                operators.append("{}")
    return HalsteadCounts(
        N1=len(operators), N2=len(operands),
        n1=len(set(operators)), n2=len(set(operands)),
    )


def compute_maintainability_index(size: int, mccabe: int, halstead: HalsteadCounts) -> float:
    """Classic three-term 171-based formula, unclamped."""
    volume = halstead.volume
    return 171.0 - 5.2 * math.log(max(volume, 1.0)) - 0.23 * mccabe - 16.2 * math.log(size)


def _buse_features(decl: MethodDeclaration, toks: list[Token]) -> dict[str, float]:
    lines = decl.bodyText.split("\n")
    nlines = len(lines)
    identifiers = [t.text for t in toks if t.kind == "identifier"]
    nonblank_indents = [_indent_width(line) for line in lines if line.strip()]
    return {
        "avgLineLength": sum(len(line) for line in lines) / nlines,
        "maxLineLength": float(max(len(line) for line in lines)),
        "avgIdentifierLength": (sum(len(s) for s in identifiers) / len(identifiers)) if identifiers else 0.0,
        "identifiersPerLine": len(identifiers) / nlines,
        "avgIndent": (sum(nonblank_indents) / len(nonblank_indents)) if nonblank_indents else 0.0,
        "commentLineRatio": _comment_line_count(toks) / nlines,
        "blankLineRatio": sum(1 for line in lines if not line.strip()) / nlines,
        "parensPerLine": decl.bodyText.count("(") / nlines,
    }


def compute_readability_buse(decl: MethodDeclaration) -> float:
    """Surrogate of the learned line-shape readability model: logistic score
    over eight documented features with ledger-fixed weights."""
    features = _buse_features(decl, _declaration_tokens(decl))
    z = BUSE_INTERCEPT + sum(w * features[name] for name, w in BUSE_WEIGHTS)
    return _logistic(z)


def byte_entropy(text: str) -> float:
    """Shannon entropy (bits) of the UTF-8 byte distribution."""
    data = text.encode("utf-8")
    if not data:
        return 0.0
    counts: dict[int, int] = {}
    for b in data:
        counts[b] = counts.get(b, 0) + 1
    total = len(data)
    return -sum((c / total) * math.log2(c / total) for c in counts.values())


def compute_readability_posnett(decl: MethodDeclaration, halstead: HalsteadCounts) -> float:
    """Token-entropy readability model: logistic(8.87 - 0.033*V + 0.40*lines - 1.5*H)."""
    lines = decl.bodyText.count("\n") + 1
    z = (
        POSNETT_INTERCEPT
        + POSNETT_VOLUME_COEF * halstead.volume
        + POSNETT_LINES_COEF * lines
        + POSNETT_ENTROPY_COEF * byte_entropy(decl.bodyText)
    )
    return _logistic(z)


_DECL_SKIP_LEADING = {"final"}
_NAME_FOLLOWERS = {"=", ",", ";", ":"}


def _count_local_declarators(body: list[Token]) -> int:
    """Local-variable declarators in the body block.

    Multi-declarator statements count each declarator; for-init, enhanced-for
    and try-resource declarators are included; catch and lambda parameters
    are not.
    """
    n = len(body)
    count = 0
    i = 1 if body and body[0].text == "{" else 0
    statement_start = True
    paren_kind: list[str] = []  # kind of each open paren group
    prev_keyword = None
    while i < n:
        t = body[i]
        txt = t.text
        if txt == "(":
            kind = prev_keyword or "other"
            if kind == "catch":
                i = _match_forward(body, i, "(", ")") + 1
                prev_keyword = None
                statement_start = False
                continue
            paren_kind.append(kind)
            statement_start = kind in ("for", "try")
            prev_keyword = None
            i += 1
            continue
        if txt == ")":
            if paren_kind:
                paren_kind.pop()
            statement_start = False
            i += 1
            continue
        if txt in ("{", "}", ";", ":"):
            statement_start = not paren_kind or paren_kind[-1] in ("for", "try")
            prev_keyword = None
            i += 1
            continue
        if t.kind == "keyword":
            prev_keyword = txt
            if statement_start and txt in _DECL_SKIP_LEADING:
                i += 1
                continue
            if statement_start and txt in PRIMITIVE_TYPES and txt != "void":
                consumed, declarators = _try_parse_declaration(body, i, n)
                if declarators:
                    count += declarators
                    i = consumed
                    statement_start = False
                    continue
            statement_start = False
            i += 1
            continue
        if statement_start and t.kind == "identifier" and txt != "yield":
            consumed, declarators = _try_parse_declaration(body, i, n)
            if declarators:
                count += declarators
                i = consumed
                statement_start = False
                continue
        if statement_start and txt == "@":
            i += 1  # annotation on a local declaration
            while i < n and (body[i].kind == "identifier" or body[i].text == "."):
                i += 1
            if i < n and body[i].text == "(":
                i = _match_forward(body, i, "(", ")") + 1
            continue
        statement_start = False
        prev_keyword = None
        i += 1
    return count


def _try_parse_declaration(body: list[Token], i: int, n: int) -> tuple[int, int]:
    """Parse `Type name (= init)? (, name (= init)?)*` at i.

    Returns (index after the parsed prefix, declarator count); count 0 means
    no declaration starts here.
    """
    j = i
    t = body[j]
    if t.kind == "keyword" and t.text in PRIMITIVE_TYPES and t.text != "void":
        j += 1
    elif t.kind == "identifier":
        j += 1
        while j + 1 < n and body[j].text == "." and body[j + 1].kind == "identifier":
            j += 2
    else:
        return i, 0
    if j < n and body[j].text == "<":
        depth = 0
        k = j
        while k < n:
            txt = body[k].text
            if txt == "<":
                depth += 1
            elif txt == ">":
                depth -= 1
            elif txt == ">>":
                depth -= 2
            elif txt == ">>>":
                depth -= 3
            elif txt in (";", "{", "}"):
                return i, 0
            if depth <= 0:
                break
            k += 1
        if k >= n:
            return i, 0
        j = k + 1
    while j + 1 < n and body[j].text == "[" and body[j + 1].text == "]":
        j += 2
    if j >= n or body[j].kind != "identifier":
        return i, 0
    name_idx = j
    j += 1
    while j + 1 < n and body[j].text == "[" and body[j + 1].text == "]":
        j += 2  # legacy `int a[]`
    if j >= n or body[j].text not in _NAME_FOLLOWERS and body[j].text != ")":
        return i, 0
    if body[j].text == ")":  # e.g. instanceof pattern variables
        return i, 0
    count = 1
    # walk the rest of the statement, counting `, name` at group depth 0
    depth = 0
    while j < n:
        txt = body[j].text
        if txt in ("(", "[", "{"):
            depth += 1
        elif txt in (")", "]", "}"):
            if depth == 0:
                break
            depth -= 1
        elif txt == ";" and depth == 0:
            break
        elif txt == ":" and depth == 0:
            break  # enhanced-for: single declarator
        elif txt == "," and depth == 0:
            if j + 1 < n and body[j + 1].kind == "identifier":
                count += 1
                j += 1
        j += 1
    return name_idx + 1, count


def compute_counts(decl: MethodDeclaration) -> tuple[int, int, float]:
    """(parameters, local-variable declarators, commentRatio)."""
    toks = _declaration_tokens(decl)
    body = _body_slice(toks)
    variables = _count_local_declarators(body)
    size = compute_size(decl)
    comment_lines = _comment_line_count(toks)
    return len(decl.parameterTypes), variables, comment_lines / size


def detect_getter_setter(decl: MethodDeclaration) -> bool:
    body = _body_slice(_declaration_tokens(decl))
    inner = body[1:-1] if len(body) >= 2 else []
    if not inner:
        return False
    semis = [k for k, t in enumerate(inner) if t.text == ";"]
    single_statement = len(semis) == 1 and semis[0] == len(inner) - 1
    if not single_statement:
        return False
    name = decl.name
    arity = len(decl.parameterTypes)
    if (name.startswith("get") or name.startswith("is")) and arity == 0:
        return inner[0].kind == "keyword" and inner[0].text == "return"
    if name.startswith("set") and arity == 1:
        has_plain_assign = any(t.text == "=" for t in inner)
        starts_with_return = inner[0].kind == "keyword" and inner[0].text == "return"
        return has_plain_assign and not starts_with_return
    return False


def compute_metric_vector(decl: MethodDeclaration) -> MetricVector:
    """All 17 metrics; deterministic for identical declaration text."""
    size = compute_size(decl)
    halstead = compute_halstead(decl)
    mccabe = compute_mccabe(decl)
    nvar, ncomp = compute_mcclure(decl)
    parameters, variables, comment_ratio = compute_counts(decl)
    return MetricVector(
        size=size,
        mccabe=mccabe,
        nvar=nvar,
        ncomp=ncomp,
        indentStd=compute_indent_std(decl),
        maxBlockDepth=compute_max_block_depth(decl),
        fanout=compute_fanout(decl),
        halsteadLength=halstead.length,
        maintainabilityIndex=compute_maintainability_index(size, mccabe, halstead),
        readability=compute_readability_buse(decl),
        simpleReadability=compute_readability_posnett(decl, halstead),
        parameters=parameters,
        variables=variables,
        commentRatio=comment_ratio,
        getterSetter=detect_getter_setter(decl),
        isPublic="public" in decl.modifiers,
        isStatic="static" in decl.modifiers,
    )
