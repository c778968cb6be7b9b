"""Lexing of Java source and extraction of method declarations.

The parser is declaration-level only: it tracks braces, parentheses and
member headers well enough to find every named method with a body, but it
builds no expression AST.  That is sufficient for the metric and history
layers, which work on token streams and verbatim source lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class LexicalError(Exception):
    """Unterminated string/comment or other unlexable input."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ExtractionError(Exception):
    """Structural failure (e.g. unbalanced braces) while extracting methods."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while""".split()
)

# true/false/null are literals, not keywords, so they land on the operand side
# of the token classification.
WORD_LITERALS = frozenset({"true", "false", "null"})

MODIFIERS = frozenset(
    {"public", "private", "protected", "static", "abstract", "final",
     "synchronized", "default", "native"}
)

PRIMITIVE_TYPES = frozenset(
    {"boolean", "byte", "char", "short", "int", "long", "float", "double", "void"}
)

_OPERATORS = [
    ">>>=", ">>=", "<<=", ">>>", ">>", "<<", "->", "==", "!=", "<=", ">=",
    "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^", "?", ":",
]

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r\n\f]+)
    | (?P<linecomment>//[^\n]*)
    | (?P<blockcomment>/\*(?:[^*]|\*(?!/))*\*/)
    | (?P<textblock>\"\"\"(?:[^"\\]|\\.|\"(?!\"\"))*\"\"\")
    | (?P<string>"(?:[^"\\\n]|\\.)*")
    | (?P<char>'(?:[^'\\\n]|\\.)*')
    | (?P<number>
          0[xX][0-9a-fA-F_]+[lL]?
        | 0[bB][01_]+[lL]?
        | (?:\d[\d_]*\.[\d_]*(?:[eE][+-]?\d+)?
           |\.\d[\d_]*(?:[eE][+-]?\d+)?
           |\d[\d_]*(?:[eE][+-]?\d+)?)[fFdDlL]?
      )
    | (?P<ident>(?:[^\W\d]|\$)[\w$]*)
    | (?P<sep>\.\.\.|::|[(){}\[\];,.@])
    | (?P<op>%s)
    """ % "|".join(re.escape(op) for op in _OPERATORS),
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | identifier | literal | operator | separator | comment
    text: str
    line: int  # 1-based
    column: int  # 1-based

    @property
    def line_count(self) -> int:
        return self.text.count("\n") + 1


@dataclass(frozen=True)
class SourceFile:
    path: str  # repository-relative, forward slashes
    content: str  # LF-only, UTF-8


@dataclass
class MethodDeclaration:
    name: str
    parameterTypes: list[str]
    modifiers: set[str]
    annotations: list[str]
    bodyText: str
    startLine: int
    endLine: int
    containerChain: list[str]


def normalize_source(path: str, raw: str) -> SourceFile:
    """Build a SourceFile with CRLF folded to LF and forward-slash path."""
    return SourceFile(path=path.replace("\\", "/"), content=raw.replace("\r\n", "\n").replace("\r", "\n"))


def tokenize(source: str) -> list[Token]:
    """Lex Java source into a full-fidelity token stream (whitespace dropped)."""
    tokens: list[Token] = []
    pos = 0
    line = 1
    col = 1
    n = len(source)
    while pos < n:
        # Unterminated multi-char constructs would otherwise be mis-lexed as
        # operator runs, so they are detected up front.
        if source.startswith("/*", pos) and source.find("*/", pos + 2) < 0:
            raise LexicalError("unterminated block comment", line)
        if source.startswith('"""', pos) and source.find('"""', pos + 3) < 0:
            raise LexicalError("unterminated text block", line)
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            ch = source[pos]
            if ch == '"':
                raise LexicalError("unterminated string literal", line)
            if ch == "'":
                raise LexicalError("unterminated character literal", line)
            raise LexicalError(f"unexpected character {ch!r}", line)
        text = m.group(0)
        group = m.lastgroup
        if group != "ws":
            if group == "ident":
                if text in KEYWORDS:
                    kind = "keyword"
                elif text in WORD_LITERALS:
                    kind = "literal"
                else:
                    kind = "identifier"
            elif group in ("linecomment", "blockcomment"):
                kind = "comment"
            elif group in ("string", "char", "number", "textblock"):
                kind = "literal"
            elif group == "sep":
                kind = "separator"
            else:
                kind = "operator"
            tokens.append(Token(kind=kind, text=text, line=line, column=col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    return tokens


def signature(decl: MethodDeclaration) -> str:
    """Stable identity key: Outer.Inner#name(ErasedType,...)."""
    return "%s#%s(%s)" % (".".join(decl.containerChain), decl.name, ",".join(decl.parameterTypes))


_TYPE_DECL_KEYWORDS = frozenset({"class", "interface", "enum"})


def _skip_parens(toks: list[Token], i: int) -> int:
    """Index just past the ')' matching toks[i] == '('."""
    depth = 0
    n = len(toks)
    while i < n:
        t = toks[i].text
        if t == "(":
            depth += 1
        elif t == ")":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    raise ExtractionError("unbalanced parentheses", toks[-1].line if toks else 1)


def _skip_angles(toks: list[Token], i: int) -> int | None:
    """Index past a balanced <...> group starting at toks[i] == '<'.

    Returns None when the group never balances before ';' or '{' (the '<'
    was a comparison, not generics).
    """
    depth = 0
    n = len(toks)
    while i < n:
        t = toks[i].text
        if t == "<":
            depth += 1
        elif t == ">":
            depth -= 1
        elif t == ">>":
            depth -= 2
        elif t == ">>>":
            depth -= 3
        elif t in (";", "{", "}"):
            return None
        if depth <= 0:
            return i + 1
        i += 1
    return None


def _erase_param(toks: list[Token]) -> str | None:
    """Render one formal parameter as an erased type name, or None to skip."""
    parts: list[Token] = []
    i = 0
    n = len(toks)
    while i < n:
        t = toks[i]
        if t.text == "@":
            i += 1
            while i < n and toks[i].text == ".":
                i += 1
            # annotation name plus optional argument group
            if i < n and toks[i].kind == "identifier":
                i += 1
                while i + 1 < n and toks[i].text == "." and toks[i + 1].kind == "identifier":
                    i += 2
            if i < n and toks[i].text == "(":
                i = _skip_parens(toks, i)
            continue
        if t.kind == "keyword" and t.text == "final":
            i += 1
            continue
        if t.text == "<":
            end = _skip_angles(toks, i)
            if end is None:
                i += 1
            else:
                i = end
            continue
        parts.append(t)
        i += 1
    if not parts:
        return None
    # The declared name is the last identifier; trailing [] after it belongs
    # to the type (legacy array syntax).
    name_idx = None
    for j in range(len(parts) - 1, -1, -1):
        if parts[j].kind == "identifier":
            name_idx = j
            break
    if name_idx is None:
        return None
    if parts[name_idx].text == "this" and name_idx == len(parts) - 1 and name_idx > 0:
        return None  # receiver parameter
    type_toks = parts[:name_idx] + parts[name_idx + 1:]
    if not type_toks:
        return None
    rendered = "".join("[]" if t.text == "..." else t.text for t in type_toks)
    return rendered


def _parse_parameter_types(toks: list[Token], open_idx: int, close_idx: int) -> list[str]:
    """Erased type names for the parameter list in toks[open_idx+1:close_idx]."""
    inner = toks[open_idx + 1:close_idx]
    if not inner:
        return []
    groups: list[list[Token]] = [[]]
    depth_paren = depth_brack = depth_angle = 0
    for t in inner:
        txt = t.text
        if txt == "(":
            depth_paren += 1
        elif txt == ")":
            depth_paren -= 1
        elif txt == "[":
            depth_brack += 1
        elif txt == "]":
            depth_brack -= 1
        elif txt == "<":
            depth_angle += 1
        elif txt == ">":
            depth_angle -= 1
        elif txt == ">>":
            depth_angle -= 2
        elif txt == ">>>":
            depth_angle -= 3
        if txt == "," and depth_paren == depth_brack == depth_angle == 0:
            groups.append([])
        else:
            groups[-1].append(t)
    types = []
    for g in groups:
        erased = _erase_param(g)
        if erased is not None:
            types.append(erased)
    return types


class _Extractor:
    def __init__(self, file: SourceFile):
        self.file = file
        self.lines = file.content.split("\n")
        self.toks = [t for t in tokenize(file.content) if t.kind != "comment"]
        self.found: list[MethodDeclaration] = []

    def run(self) -> list[MethodDeclaration]:
        depth = 0
        for t in self.toks:
            if t.text == "{":
                depth += 1
            elif t.text == "}":
                depth -= 1
                if depth < 0:
                    raise ExtractionError("unbalanced braces", t.line)
        if depth != 0:
            raise ExtractionError("unbalanced braces", self.toks[-1].line if self.toks else 1)
        self._scan(0, len(self.toks), (), in_type=False)
        # Nested local-class methods are appended before their enclosing
        # method finishes; restore source order.
        self.found.sort(key=lambda d: (d.startLine, -d.endLine))
        return self.found

    def _scan(self, i: int, end: int, chain: tuple[str, ...], in_type: bool) -> int:
        """Scan tokens[i:end] at one nesting level; returns index past the
        closing '}' (or end)."""
        toks = self.toks
        header: list[Token] = []
        header_start: int | None = None
        annotations: list[str] = []

        def reset() -> None:
            nonlocal header, header_start, annotations
            header = []
            header_start = None
            annotations = []

        while i < end:
            t = toks[i]
            txt = t.text
            if txt == "}":
                return i + 1
            if txt in (";", ","):
                reset()
                i += 1
                continue
            if header_start is None:
                header_start = i
            if txt == "@":
                if i + 1 < end and toks[i + 1].text == "interface":
                    header.append(toks[i + 1])  # annotation-type declaration
                    i += 2
                    continue
                j = i + 1
                name_parts = []
                while j < end and toks[j].kind == "identifier":
                    name_parts.append(toks[j].text)
                    j += 1
                    if j < end and toks[j].text == ".":
                        j += 1
                    else:
                        break
                annotations.append("@" + ".".join(name_parts))
                if j < end and toks[j].text == "(":
                    j = _skip_parens(toks, j)
                i = j
                continue
            if txt == "<":
                past = _skip_angles(toks, i)
                if past is not None:
                    i = past
                    continue
                header.append(t)
                i += 1
                continue
            if txt == "=":
                # field/constant initializer: consume expression, descending
                # into any brace bodies it contains (anonymous classes, array
                # initializers) to catch nested named types.
                i += 1
                depth_paren = 0
                while i < end:
                    e = toks[i].text
                    if e == "(" or e == "[":
                        depth_paren += 1
                    elif e == ")" or e == "]":
                        depth_paren -= 1
                    elif e == "{":
                        i = self._scan(i + 1, end, chain, in_type=False)
                        continue
                    elif e == ";" and depth_paren <= 0:
                        break
                    elif e == "}":
                        break  # malformed; let outer level see it
                    i += 1
                reset()
                continue
            if txt == "(":
                close = _skip_parens(toks, i) - 1
                k = close + 1
                # optional throws clause
                if k < end and toks[k].text == "throws":
                    k += 1
                    while k < end and (toks[k].kind == "identifier" or toks[k].text in (".", ",")):
                        k += 1
                if k < end and toks[k].text == "{":
                    i = self._member_with_body(header, header_start, annotations, i, close, k, end, chain, in_type)
                    reset()
                    continue
                if k < end and toks[k].text == ";":
                    reset()  # abstract/native signature or enum constant
                    i = k + 1
                    continue
                header.append(t)  # unrecognized parenthesized header part
                i = close + 1
                continue
            if txt == "{":
                type_name = self._type_decl_name(header, end)
                if type_name is not None:
                    i = self._scan(i + 1, end, chain + (type_name,), in_type=True)
                else:
                    i = self._scan(i + 1, end, chain, in_type=False)
                reset()
                continue
            header.append(t)
            i += 1
        return i

    def _type_decl_name(self, header: list[Token], end: int) -> str | None:
        for j, t in enumerate(header):
            if (t.kind == "keyword" and t.text in _TYPE_DECL_KEYWORDS) or (
                t.kind == "identifier" and t.text == "record" and j + 1 < len(header)
            ):
                if j + 1 < len(header) and header[j + 1].kind == "identifier":
                    return header[j + 1].text
        return None

    def _member_with_body(
        self,
        header: list[Token],
        header_start: int | None,
        annotations: list[str],
        open_idx: int,
        close_idx: int,
        body_open: int,
        end: int,
        chain: tuple[str, ...],
        in_type: bool,
    ) -> int:
        toks = self.toks
        type_name = self._type_decl_name(header, end)
        if type_name is not None:  # record declaration with component list
            return self._scan(body_open + 1, end, chain + (type_name,), in_type=True)
        name_tok = header[-1] if header and header[-1].kind == "identifier" else None
        pre_name = header[:-1] if name_tok is not None else header
        type_toks = [
            t for t in pre_name
            if not (t.kind == "keyword" and t.text in MODIFIERS)
        ]
        is_method = (
            in_type
            and chain
            and name_tok is not None
            and any(t.kind == "identifier" or (t.kind == "keyword" and t.text in PRIMITIVE_TYPES)
                    or t.text in ("[", "]") for t in type_toks)
        )
        body_close = self._scan(body_open + 1, end, chain, in_type=False)
        if is_method:
            start_line = toks[header_start].line if header_start is not None else name_tok.line
            end_line = toks[body_close - 1].line
            body_text = "\n".join(self.lines[start_line - 1:end_line])
            self.found.append(
                MethodDeclaration(
                    name=name_tok.text,
                    parameterTypes=_parse_parameter_types(toks, open_idx, close_idx),
                    modifiers={t.text for t in header if t.kind == "keyword" and t.text in MODIFIERS},
                    annotations=list(annotations),
                    bodyText=body_text,
                    startLine=start_line,
                    endLine=end_line,
                    containerChain=list(chain),
                )
            )
        return body_close


def extract_methods(file: SourceFile) -> list[MethodDeclaration]:
    """All named methods with bodies in named types, in source order.

    Constructors, initializer blocks, bodiless signatures, and methods whose
    immediate container is an anonymous class or lambda are excluded.
    """
    return _Extractor(file).run()
