"""OpenQASM 2.0 subset reader and writer.

Accepted programs declare exactly one quantum register and use the gates
h, x, rx, ry, rz, cx, cz, cp, swap, plus the extension names ccz and cccz.
`creg`, `barrier` and `measure` statements are accepted and ignored. Angle
arguments may use `pi`, unary minus and the four arithmetic operators.
"""

import logging
import math
import operator
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import pyparsing as pp

from circuit import Circuit, Gate, GateTag, cccz, ccz, cp, cx, cz, h, r1q, swap, x
from errors import CircuitError, QasmError

logger = logging.getLogger(__name__)

_NAME_COMMENT = re.compile(r"^\s*//\s*circuit:\s*(.*?)\s*$", re.MULTILINE)

# name -> (number of angle parameters, arity, builder)
_GATES: Dict[str, Tuple[int, int, Callable[..., Gate]]] = {
    "h": (0, 1, h),
    "x": (0, 1, x),
    "rx": (1, 1, lambda theta, q: r1q("x", theta, q)),
    "ry": (1, 1, lambda theta, q: r1q("y", theta, q)),
    "rz": (1, 1, lambda theta, q: r1q("z", theta, q)),
    "cx": (0, 2, cx),
    "cz": (0, 2, cz),
    "cp": (1, 2, cp),
    "swap": (0, 2, swap),
    "ccz": (0, 3, ccz),
    "cccz": (0, 4, cccz),
}

_BINARY_OPS = {"*": operator.mul, "/": operator.truediv, "+": operator.add, "-": operator.sub}


@dataclass
class _Statement:
    kind: str
    loc: int
    name: str = ""
    params: Tuple[float, ...] = ()
    qubits: Tuple[Tuple[str, int], ...] = ()
    size: int = 0


def _negate(tokens):
    return -tokens[0][1]


def _fold(tokens):
    items = tokens[0]
    value = items[0]
    for op, operand in zip(items[1::2], items[2::2]):
        value = _BINARY_OPS[op](value, operand)
    return value


def _build_grammar() -> pp.ParserElement:
    lbrack, rbrack, lpar, rpar, semi, comma = map(pp.Suppress, "[]();,")
    ident = pp.Word(pp.alphas + "_", pp.alphanums + "_")
    integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))

    number = pp.Regex(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?").set_parse_action(
        lambda t: float(t[0])
    )
    pi = pp.CaselessKeyword("pi").set_parse_action(lambda: math.pi)
    angle = pp.infix_notation(
        number | pi,
        [
            ("-", 1, pp.OpAssoc.RIGHT, _negate),
            (pp.one_of("* /"), 2, pp.OpAssoc.LEFT, _fold),
            (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT, _fold),
        ],
    )

    qubit_ref = pp.Group(ident + lbrack + integer + rbrack)
    reg_ref = ident + pp.Opt(lbrack + integer + rbrack)

    header = pp.Suppress(pp.Keyword("OPENQASM") + pp.Regex(r"\d+(\.\d+)?") + semi)
    include = pp.Suppress(pp.Keyword("include") + pp.QuotedString('"') + semi)

    qreg = (pp.Keyword("qreg") + ident + lbrack + integer + rbrack + semi).set_parse_action(
        lambda s, loc, t: _Statement("qreg", loc, name=t[1], size=t[2])
    )
    creg = pp.Suppress(pp.Keyword("creg") + ident + lbrack + integer + rbrack + semi)
    barrier = pp.Suppress(pp.Keyword("barrier") + pp.DelimitedList(reg_ref) + semi)
    measure = pp.Suppress(pp.Keyword("measure") + reg_ref + pp.Literal("->") + reg_ref + semi)

    params = pp.Opt(lpar + pp.Opt(pp.DelimitedList(angle)) + rpar)
    gate = (ident + pp.Group(params) + pp.Group(pp.DelimitedList(qubit_ref)) + semi)
    gate.set_parse_action(
        lambda s, loc, t: _Statement(
            "gate",
            loc,
            name=t[0],
            params=tuple(float(p) for p in t[1]),
            qubits=tuple((ref[0], ref[1]) for ref in t[2]),
        )
    )

    statement = qreg | creg | barrier | measure | gate
    program = pp.Opt(header) + pp.ZeroOrMore(include) + pp.ZeroOrMore(statement) + pp.StringEnd()
    program.ignore(pp.cpp_style_comment)
    return program


_GRAMMAR = _build_grammar()


def _error(message: str, text: str, loc: int) -> QasmError:
    return QasmError(message, line=pp.lineno(loc, text), column=pp.col(loc, text))


def parse_qasm(text: str, name: Optional[str] = None) -> Circuit:
    """Parse an OpenQASM 2.0 subset program into a Circuit.

    Raises:
        QasmError: syntax errors and semantic errors (unknown gate, operand
            out of range, duplicate operand), with line and column.
    """
    try:
        statements: List[_Statement] = list(_GRAMMAR.parse_string(text, parse_all=True))
    except pp.ParseBaseException as exc:
        raise QasmError(f"syntax error: {exc.msg}", line=exc.lineno, column=exc.col) from exc
    except ZeroDivisionError as exc:
        raise QasmError("division by zero in angle expression") from exc

    registers = [s for s in statements if s.kind == "qreg"]
    if not registers:
        raise QasmError("program declares no qreg")
    if len(registers) > 1:
        raise _error("only one qreg is supported", text, registers[1].loc)
    register = registers[0]
    if register.size < 1:
        raise _error("qreg must hold at least one qubit", text, register.loc)

    gates: List[Gate] = []
    for stmt in statements:
        if stmt.kind != "gate":
            continue
        if stmt.loc < register.loc:
            raise _error(f"gate '{stmt.name}' used before qreg declaration", text, stmt.loc)
        if stmt.name not in _GATES:
            raise _error(f"unknown gate '{stmt.name}'", text, stmt.loc)
        n_params, arity, builder = _GATES[stmt.name]
        if len(stmt.params) != n_params:
            raise _error(
                f"gate '{stmt.name}' takes {n_params} parameter(s), got {len(stmt.params)}",
                text,
                stmt.loc,
            )
        if len(stmt.qubits) != arity:
            raise _error(
                f"gate '{stmt.name}' takes {arity} qubit(s), got {len(stmt.qubits)}",
                text,
                stmt.loc,
            )
        indices = []
        for reg_name, index in stmt.qubits:
            if reg_name != register.name:
                raise _error(f"unknown register '{reg_name}'", text, stmt.loc)
            if index >= register.size:
                raise _error(
                    f"qubit index {index} out of range for {reg_name}[{register.size}]",
                    text,
                    stmt.loc,
                )
            indices.append(index)
        if len(set(indices)) != len(indices):
            raise _error(f"duplicate operand in '{stmt.name}'", text, stmt.loc)
        try:
            gates.append(builder(*stmt.params, *indices))
        except CircuitError as exc:
            raise _error(str(exc), text, stmt.loc) from exc

    if name is None:
        match = _NAME_COMMENT.search(text)
        name = match.group(1) if match and match.group(1) else "qasm"
    logger.debug("parsed %d gates on %d qubits", len(gates), register.size)
    return Circuit(register.size, tuple(gates), name)


def _format_gate(gate: Gate) -> str:
    operands = ",".join(f"q[{q}]" for q in gate.operands)
    tag = gate.tag
    if tag == GateTag.R1Q:
        return f"r{gate.kind.axis}({gate.kind.angle!r}) {operands};"
    if tag == GateTag.CP:
        return f"cp({gate.kind.angle!r}) {operands};"
    return f"{tag.value} {operands};"


def emit_qasm(circuit: Circuit) -> str:
    """Render a Circuit as an OpenQASM 2.0 program, one statement per line."""
    name = " ".join(circuit.name.split())
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"// circuit: {name}",
        f"qreg q[{circuit.n}];",
    ]
    lines.extend(_format_gate(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"
