"""Parser for the textual intention DSL.

Hand-written lexer and recursive-descent parser. Parse errors do not abort
the run: the parser records a diagnostic with line/column and resynchronizes
at the next top-level declaration keyword, so one corrupted block does not
suppress diagnostics for (or parsing of) the others. `parse` raises
`DslSyntaxError` carrying every diagnostic found.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from enum import Enum

from .model import (
    Asset,
    Comparison,
    ComparisonOp,
    Condition,
    ContractHeader,
    FieldPath,
    IntentionModel,
    Literal,
    Operand,
    Param,
    ParamType,
    Participant,
    Platform,
    Relationship,
    RelationshipKind,
    Transaction,
)

BLOCK_KEYWORDS = frozenset(
    {"participant", "asset", "transaction", "tranrel", "assetrel", "condition"}
)

_PLATFORMS = {p.value: p for p in Platform}
_PARAM_TYPES = {t.value: t for t in ParamType}
_OPERATORS = {op.value: op for op in ComparisonOp}


@dataclass(frozen=True)
class SyntaxIssue:
    """One diagnostic: what was expected and what was found, with position."""

    line: int
    column: int
    expected: str
    found: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: expected {self.expected}, found {self.found}"


class DslSyntaxError(ValueError):
    """Raised by parse(); carries every syntax diagnostic for the source."""

    def __init__(self, issues: list[SyntaxIssue]):
        self.issues = tuple(issues)
        summary = "; ".join(str(i) for i in issues[:3])
        if len(issues) > 3:
            summary += f"; and {len(issues) - 3} more"
        super().__init__(f"{len(issues)} syntax error(s): {summary}")


class TokenKind(Enum):
    NAME = "name"
    STRING = "string"
    NUMBER = "number"
    LBRACE = "'{'"
    RBRACE = "'}'"
    COLON = "':'"
    ARROW = "'->'"
    DOT = "'.'"
    OP = "operator"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    value: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind in (TokenKind.NAME, TokenKind.STRING):
            return f'{self.kind.value} "{self.value}"'
        if self.kind == TokenKind.NUMBER:
            return f"number {self.value}"
        if self.kind == TokenKind.OP:
            return f"'{self.value}'"
        return self.kind.value


def tokenize(source: str) -> tuple[list[Token], list[SyntaxIssue]]:
    tokens: list[Token] = []
    issues: list[SyntaxIssue] = []
    pos, line, col = 0, 1, 1
    n = len(source)

    def push(kind: TokenKind, value: str, tline: int, tcol: int) -> None:
        tokens.append(Token(kind, value, tline, tcol))

    while pos < n:
        ch = source[pos]
        if ch == "\n":
            pos += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            pos += 1
            col += 1
            continue
        if ch == "#":
            while pos < n and source[pos] != "\n":
                pos += 1
            continue
        start_line, start_col = line, col
        if ch == '"':
            pos += 1
            col += 1
            buf: list[str] = []
            closed = False
            while pos < n:
                c = source[pos]
                if c == "\n":
                    break
                if c == "\\" and pos + 1 < n and source[pos + 1] in ('"', "\\"):
                    buf.append(source[pos + 1])
                    pos += 2
                    col += 2
                    continue
                if c == '"':
                    pos += 1
                    col += 1
                    closed = True
                    break
                buf.append(c)
                pos += 1
                col += 1
            if closed:
                push(TokenKind.STRING, "".join(buf), start_line, start_col)
            else:
                issues.append(
                    SyntaxIssue(start_line, start_col, "closing '\"'", "end of line")
                )
            continue
        if ch.isalpha():
            end = pos + 1
            while end < n and (source[end].isalnum() or source[end] in "_-"):
                end += 1
            # keep '->' intact: a name never swallows the hyphen of an arrow
            while end > pos + 1 and source[end - 1] == "-" and end < n and source[end] == ">":
                end -= 1
            lexeme = source[pos:end]
            push(TokenKind.NAME, lexeme, start_line, start_col)
            col += end - pos
            pos = end
            continue
        if ch.isdigit() or (ch == "-" and pos + 1 < n and source[pos + 1].isdigit()):
            end = pos + 1
            while end < n and source[end].isdigit():
                end += 1
            if end < n and source[end] == "." and end + 1 < n and source[end + 1].isdigit():
                end += 1
                while end < n and source[end].isdigit():
                    end += 1
            lexeme = source[pos:end]
            push(TokenKind.NUMBER, lexeme, start_line, start_col)
            col += end - pos
            pos = end
            continue
        if ch == "-" and pos + 1 < n and source[pos + 1] == ">":
            push(TokenKind.ARROW, "->", start_line, start_col)
            pos += 2
            col += 2
            continue
        two = source[pos : pos + 2]
        if two in ("==", "!=", "<=", ">="):
            push(TokenKind.OP, two, start_line, start_col)
            pos += 2
            col += 2
            continue
        if ch in "<>":
            push(TokenKind.OP, ch, start_line, start_col)
            pos += 1
            col += 1
            continue
        simple = {"{": TokenKind.LBRACE, "}": TokenKind.RBRACE, ":": TokenKind.COLON, ".": TokenKind.DOT}
        if ch in simple:
            push(simple[ch], ch, start_line, start_col)
            pos += 1
            col += 1
            continue
        issues.append(SyntaxIssue(start_line, start_col, "a declaration", f"character {ch!r}"))
        pos += 1
        col += 1

    tokens.append(Token(TokenKind.EOF, "", line, col))
    return tokens, issues


class _BlockError(Exception):
    """Internal: aborts the current block after its diagnostic was recorded."""


class _Parser:
    def __init__(self, tokens: list[Token], issues: list[SyntaxIssue]):
        self.tokens = tokens
        self.pos = 0
        self.issues = issues

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != TokenKind.EOF:
            self.pos += 1
        return tok

    def fail(self, expected: str) -> None:
        tok = self.cur
        self.issues.append(SyntaxIssue(tok.line, tok.column, expected, tok.describe()))
        raise _BlockError

    def expect(self, kind: TokenKind, expected: str) -> Token:
        if self.cur.kind != kind:
            self.fail(expected)
        return self.advance()

    def expect_keyword(self, word: str) -> None:
        if self.cur.kind != TokenKind.NAME or self.cur.value != word:
            self.fail(f"'{word}'")
        self.advance()

    def at_keyword(self, *words: str) -> bool:
        return self.cur.kind == TokenKind.NAME and self.cur.value in words

    def sync_to_block(self) -> None:
        """Skip ahead to the next top-level declaration, '}' or EOF."""
        depth = 0
        while self.cur.kind != TokenKind.EOF:
            tok = self.cur
            if tok.kind == TokenKind.LBRACE:
                depth += 1
            elif tok.kind == TokenKind.RBRACE:
                if depth == 0:
                    return
                depth -= 1
            elif depth == 0 and tok.kind == TokenKind.NAME and tok.value in BLOCK_KEYWORDS:
                return
            self.advance()

    # --- grammar productions -------------------------------------------

    def parse_model(self) -> IntentionModel:
        header = ContractHeader()
        try:
            header = self.parse_header()
        except _BlockError:
            self.recover_to_body()

        participants: list[Participant] = []
        assets: list[Asset] = []
        transactions: list[Transaction] = []
        relationships: list[Relationship] = []
        conditions: list[Condition] = []
        closed = False

        while not closed and self.cur.kind != TokenKind.EOF:
            try:
                if self.at_keyword("participant"):
                    participants.append(self.parse_participant())
                elif self.at_keyword("asset"):
                    assets.append(self.parse_asset())
                elif self.at_keyword("transaction"):
                    transactions.append(self.parse_transaction())
                elif self.at_keyword("tranrel", "assetrel"):
                    relationships.append(self.parse_relationship())
                elif self.at_keyword("condition"):
                    conditions.append(self.parse_condition())
                elif self.cur.kind == TokenKind.RBRACE:
                    self.advance()
                    closed = True
                else:
                    self.fail("a declaration or '}'")
            except _BlockError:
                self.sync_to_block()

        if not closed:
            tok = self.cur
            self.issues.append(SyntaxIssue(tok.line, tok.column, "'}'", tok.describe()))
        elif self.cur.kind != TokenKind.EOF:
            tok = self.cur
            self.issues.append(
                SyntaxIssue(tok.line, tok.column, "end of input after '}'", tok.describe())
            )

        return IntentionModel(
            contract=header,
            participants=tuple(participants),
            assets=tuple(assets),
            transactions=tuple(transactions),
            relationships=tuple(relationships),
            conditions=tuple(conditions),
        )

    def parse_header(self) -> ContractHeader:
        self.expect_keyword("contract")
        name = self.expect(TokenKind.STRING, "contract name string").value
        self.expect_keyword("on")
        if self.cur.kind != TokenKind.NAME or self.cur.value not in _PLATFORMS:
            self.fail("platform ('azure', 'hyperledger-fabric' or 'ethereum')")
        platform = _PLATFORMS[self.advance().value]
        self.expect(TokenKind.LBRACE, "'{'")
        return ContractHeader(name=name, platform=platform)

    def recover_to_body(self) -> None:
        """After a broken header, skip to the body so blocks still parse."""
        while self.cur.kind != TokenKind.EOF:
            if self.cur.kind == TokenKind.LBRACE:
                self.advance()
                return
            if self.cur.kind == TokenKind.NAME and self.cur.value in BLOCK_KEYWORDS:
                return
            self.advance()

    def parse_params(self) -> tuple[Param, ...]:
        self.expect(TokenKind.LBRACE, "'{'")
        params: list[Param] = []
        while self.cur.kind == TokenKind.NAME:
            pname = self.advance().value
            self.expect(TokenKind.COLON, "':' after parameter name")
            if self.cur.kind != TokenKind.NAME or self.cur.value not in _PARAM_TYPES:
                self.fail("parameter type (text, integer, decimal, boolean or identity)")
            params.append(Param(name=pname, ptype=_PARAM_TYPES[self.advance().value]))
        self.expect(TokenKind.RBRACE, "'}' or a parameter")
        return tuple(params)

    def parse_participant(self) -> Participant:
        self.advance()  # participant
        name = self.expect(TokenKind.STRING, "participant name string").value
        creator = False
        if self.at_keyword("creator"):
            self.advance()
            creator = True
        return Participant(name=name, creator=creator, params=self.parse_params())

    def parse_asset(self) -> Asset:
        self.advance()
        name = self.expect(TokenKind.STRING, "asset name string").value
        return Asset(name=name, fields=self.parse_params())

    def parse_transaction(self) -> Transaction:
        self.advance()
        name = self.expect(TokenKind.STRING, "transaction name string").value
        return Transaction(name=name, params=self.parse_params())

    def parse_relationship(self) -> Relationship:
        kind = RelationshipKind(self.advance().value)
        transaction = self.expect(TokenKind.STRING, "transaction name string").value
        self.expect(TokenKind.ARROW, "'->'")
        target = self.expect(TokenKind.STRING, "target name string").value
        return Relationship(kind=kind, transaction=transaction, target=target)

    def parse_condition(self) -> Condition:
        self.advance()  # condition
        self.expect_keyword("on")
        transaction = self.expect(TokenKind.STRING, "transaction name string").value
        self.expect(TokenKind.COLON, "':'")
        start = self.cur
        lhs = self.parse_operand()
        if self.cur.kind != TokenKind.OP:
            self.fail("comparison operator (==, !=, <, <=, >, >=)")
        op = _OPERATORS[self.advance().value]
        rhs = self.parse_operand()
        if not isinstance(lhs, FieldPath) and not isinstance(rhs, FieldPath):
            self.issues.append(
                SyntaxIssue(
                    start.line,
                    start.column,
                    "a field path on at least one side of the comparison",
                    "two literals",
                )
            )
            raise _BlockError
        return Condition(transaction=transaction, guard=Comparison(lhs=lhs, op=op, rhs=rhs))

    def parse_operand(self) -> Operand:
        tok = self.cur
        if tok.kind == TokenKind.STRING:
            self.advance()
            return Literal(tok.value)
        if tok.kind == TokenKind.NUMBER:
            self.advance()
            if "." in tok.value:
                return Literal(Decimal(tok.value))
            return Literal(int(tok.value))
        if tok.kind == TokenKind.NAME:
            if tok.value in ("true", "false") and self.tokens[self.pos + 1].kind != TokenKind.DOT:
                self.advance()
                return Literal(tok.value == "true")
            segments = [self.advance().value]
            while self.cur.kind == TokenKind.DOT:
                self.advance()
                if self.cur.kind != TokenKind.NAME:
                    self.fail("field name after '.'")
                segments.append(self.advance().value)
            return FieldPath(tuple(segments))
        self.fail("an operand (field path or literal)")
        raise AssertionError("unreachable")


def parse(source: str) -> IntentionModel:
    """Parse DSL text into a model; raise DslSyntaxError listing all errors."""
    tokens, issues = tokenize(source)
    parser = _Parser(tokens, issues)
    model = parser.parse_model()
    if issues:
        raise DslSyntaxError(sorted(issues, key=lambda i: (i.line, i.column)))
    return model


def parse_operand_text(text: str) -> Operand | None:
    """Parse a standalone operand (field path or literal); None if malformed."""
    tokens, issues = tokenize(text)
    parser = _Parser(tokens, issues)
    try:
        operand = parser.parse_operand()
    except _BlockError:
        return None
    if issues or parser.cur.kind != TokenKind.EOF:
        return None
    return operand
