"""Domain/problem language: parsing, validation, grounding.

The surface syntax is s-expression based and PDDL-flavoured.  A domain
declares types, fluents and actions; a problem declares objects, initial
knowledge (including ``oneof`` exclusive-or groups), weak goals and
maintenance goals.  See docs/grammar.md for the full grammar.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

__all__ = [
    "Literal",
    "EffectProposition",
    "KnowledgeProposition",
    "ActionSchema",
    "Domain",
    "ProblemSpec",
    "GroundAction",
    "GroundDomain",
    "ParseError",
    "GroundingError",
    "ValidationReport",
    "parse",
    "parse_files",
    "validate",
    "ground",
    "pretty_print",
]

MONITOR_PREFIX = "mon_"


class ParseError(Exception):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        loc = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{message}{loc}")


class GroundingError(Exception):
    pass


@dataclass(frozen=True, order=True)
class Literal:
    """A possibly-negated fluent atom.  Arguments may be variables (?x)."""

    fluent: str
    args: tuple = ()
    positive: bool = True

    def negate(self):
        return Literal(self.fluent, self.args, not self.positive)

    @property
    def atom(self):
        if self.args:
            return f"{self.fluent}({','.join(self.args)})"
        return self.fluent

    def __str__(self):
        return self.atom if self.positive else f"-{self.atom}"

    def substitute(self, binding):
        return Literal(
            self.fluent,
            tuple(binding.get(a, a) for a in self.args),
            self.positive,
        )

    def is_ground(self):
        return not any(a.startswith("?") for a in self.args)


@dataclass(frozen=True)
class EffectProposition:
    action: str
    index: int
    conditions: tuple  # of Literal
    effect: Literal


@dataclass(frozen=True)
class KnowledgeProposition:
    action: str
    fluent: str
    args: tuple = ()


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: tuple  # of (var, type)
    effects: tuple  # of EffectProposition
    knowledge: tuple  # of KnowledgeProposition
    executability: tuple  # of Literal
    exogenous: bool = False


@dataclass(frozen=True)
class Domain:
    name: str
    types: tuple
    fluents: dict  # name -> tuple of parameter types
    schemas: tuple  # of ActionSchema


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    objects: dict  # object name -> type
    init: tuple  # of Literal (ground)
    oneofs: tuple  # of tuple of Literal
    weak_goals: tuple
    maintenance_goals: tuple


@dataclass(frozen=True)
class GroundAction:
    name: str
    eps: tuple  # of (conditions tuple[Literal], effect Literal)
    kps: tuple  # of ground fluent atom strings
    executability: tuple  # of Literal
    exogenous: bool = False


@dataclass
class GroundDomain:
    actions: dict  # name -> GroundAction
    fluents: tuple  # ground fluent atoms, sorted
    weak_goals: tuple = ()
    maintenance_goals: tuple = ()
    init: tuple = ()
    oneofs: tuple = ()
    fluent_index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.fluent_index:
            self.fluent_index = {f: i for i, f in enumerate(self.fluents)}

    # --- integer literal encoding used by the closure engine ---
    def encode(self, lit):
        idx = self.fluent_index[lit.atom]
        return idx * 2 + (0 if lit.positive else 1)

    def decode(self, code):
        atom = self.fluents[code // 2]
        name, args = split_atom(atom)
        return Literal(name, args, code % 2 == 0)

    @property
    def nlits(self):
        return 2 * len(self.fluents)

    def static_fluents(self):
        """Fluent atoms no effect proposition can change."""
        touched = set()
        for act in self.actions.values():
            for _, eff in act.eps:
                touched.add(eff.atom)
        return frozenset(f for f in self.fluents if f not in touched)


def split_atom(atom):
    if "(" in atom:
        name, rest = atom.split("(", 1)
        return name, tuple(rest.rstrip(")").split(","))
    return atom, ()


# ---------------------------------------------------------------------------
# Tokenizer / reader
# ---------------------------------------------------------------------------

class _Tok:
    __slots__ = ("text", "line", "col")

    def __init__(self, text, line, col):
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append(_Tok(c, line, col))
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            tokens.append(_Tok(text[start:i], line, start_col))
    return tokens


def _read_sexprs(text):
    tokens = _tokenize(text)
    pos = [0]

    def read():
        if pos[0] >= len(tokens):
            raise ParseError("unexpected end of input")
        tok = tokens[pos[0]]
        pos[0] += 1
        if tok.text == "(":
            items = []
            while True:
                if pos[0] >= len(tokens):
                    raise ParseError("unbalanced parenthesis", tok.line, tok.col)
                if tokens[pos[0]].text == ")":
                    pos[0] += 1
                    return items
                items.append(read())
        if tok.text == ")":
            raise ParseError("unexpected ')'", tok.line, tok.col)
        return tok

    forms = []
    while pos[0] < len(tokens):
        forms.append(read())
    return forms


def _is_tok(x, text=None):
    return isinstance(x, _Tok) and (text is None or x.text.lower() == text)


def _err(msg, node):
    if isinstance(node, _Tok):
        raise ParseError(msg, node.line, node.col)
    for item in node if isinstance(node, list) else []:
        if isinstance(item, _Tok):
            raise ParseError(msg, item.line, item.col)
    raise ParseError(msg)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_KNOWN_ACTION_KEYS = {
    ":parameters", ":effect", ":observe", ":executable", ":precondition",
    ":exogenous",
}


def _normalize_negation(sym):
    # "¬foo" written without space; normalize the glyph away.
    neg = False
    while sym.startswith("¬") or sym.startswith("~"):
        neg = True
        sym = sym[1:]
    return neg, sym


def _parse_literal(node, schema_params=None, domain_fluents=None):
    """Parse a literal: symbol, (not ...), (f a b), or a bare ¬-prefixed symbol.

    A bare fluent symbol whose declaration takes arguments is implicitly
    applied to the action parameters (supports the shorthand
    ``when ¬ab_doOpen (open ?d)``).
    """
    if isinstance(node, _Tok):
        neg, sym = _normalize_negation(node.text)
        args = ()
        if domain_fluents is not None and sym in domain_fluents:
            arity = len(domain_fluents[sym])
            if arity and schema_params is not None:
                if len(schema_params) == arity:
                    args = tuple(v for v, _ in schema_params)
                else:
                    _err(f"cannot infer arguments for fluent '{sym}'", node)
        lit = Literal(sym, args, True)
        return lit.negate() if neg else lit
    if not node:
        raise ParseError("empty literal")
    head = node[0]
    if _is_tok(head, "not") or _is_tok(head, "¬"):
        if len(node) != 2:
            _err("'not' takes exactly one literal", node)
        return _parse_literal(node[1], schema_params, domain_fluents).negate()
    if not isinstance(head, _Tok):
        _err("malformed literal", node)
    neg, sym = _normalize_negation(head.text)
    args = []
    for a in node[1:]:
        if not isinstance(a, _Tok):
            _err("literal arguments must be symbols", node)
        args.append(a.text)
    lit = Literal(sym, tuple(args), True)
    return lit.negate() if neg else lit


def _parse_condition_list(node, params, fluents):
    if isinstance(node, list) and node and _is_tok(node[0], "and"):
        return tuple(_parse_literal(x, params, fluents) for x in node[1:])
    return (_parse_literal(node, params, fluents),)


def _parse_typed_list(items, what):
    """Parse `a b - T c - U` style lists into [(name, type)]."""
    out = []
    pending = []
    i = 0
    while i < len(items):
        tok = items[i]
        if not isinstance(tok, _Tok):
            _err(f"malformed {what} list", items)
        if tok.text == "-":
            if not pending or i + 1 >= len(items):
                _err(f"dangling '-' in {what} list", items)
            typ = items[i + 1]
            if not isinstance(typ, _Tok):
                _err(f"expected type name in {what} list", items)
            out.extend((name, typ.text) for name in pending)
            pending = []
            i += 2
        else:
            pending.append(tok.text)
            i += 1
    out.extend((name, "object") for name in pending)
    return out


def _parse_effect_specs(nodes, params, fluents, action):
    """Parse the forms following :effect into a list of (conditions, effect)."""
    eps = []

    def one(spec_nodes):
        # flat form: when <cond> <lit>
        if spec_nodes and _is_tok(spec_nodes[0], "when"):
            if len(spec_nodes) != 3:
                _err("'when' takes a condition and an effect literal", spec_nodes)
            conds = _parse_condition_list(spec_nodes[1], params, fluents)
            eff = _parse_literal(spec_nodes[2], params, fluents)
            eps.append((conds, eff))
            return
        for node in spec_nodes:
            if isinstance(node, list) and node and _is_tok(node[0], "when"):
                if len(node) != 3:
                    _err("'(when ...)' takes a condition and an effect", node)
                conds = _parse_condition_list(node[1], params, fluents)
                eff = _parse_literal(node[2], params, fluents)
                eps.append((conds, eff))
            elif isinstance(node, list) and node and _is_tok(node[0], "and"):
                one(node[1:])
            else:
                eps.append(((), _parse_literal(node, params, fluents)))

    one(nodes)
    return eps


def _parse_action(form, fluents, types):
    if len(form) < 2 or not isinstance(form[1], _Tok):
        _err("action needs a name", form)
    name = form[1].text
    params = ()
    eps_raw = []
    observes = []
    executability = []
    exogenous = False
    i = 2
    while i < len(form):
        key = form[i]
        if not isinstance(key, _Tok) or not key.text.startswith(":"):
            _err(f"expected keyword in action '{name}'", key)
        kw = key.text.lower()
        if kw not in _KNOWN_ACTION_KEYS:
            _err(f"unknown keyword '{key.text}' in action '{name}'", key)
        if kw == ":exogenous":
            exogenous = True
            i += 1
            continue
        # collect the value nodes up to the next keyword
        j = i + 1
        vals = []
        while j < len(form) and not (
            isinstance(form[j], _Tok) and form[j].text.startswith(":")
        ):
            vals.append(form[j])
            j += 1
        # the flat `when` form consumes two more tokens after the keyword
        if kw == ":effect" and vals and _is_tok(vals[0], "when"):
            pass
        if not vals and kw != ":effect":
            _err(f"missing value for {key.text} in action '{name}'", key)
        if kw == ":parameters":
            if len(vals) != 1 or not isinstance(vals[0], list):
                _err(":parameters takes a single parenthesised list", key)
            typed = _parse_typed_list(vals[0], "parameter")
            for var, typ in typed:
                if not var.startswith("?"):
                    _err(f"parameter '{var}' must start with '?'", key)
                if typ not in types and typ != "object":
                    _err(f"undeclared type '{typ}'", key)
            params = tuple(typed)
        elif kw == ":effect":
            eps_raw.extend(_parse_effect_specs(vals, params, fluents, name))
        elif kw == ":observe":
            for v in vals:
                lit = _parse_literal(v, params, fluents)
                if not lit.positive:
                    _err(":observe takes a fluent, not a negative literal", key)
                observes.append((lit.fluent, lit.args))
        else:  # :executable / :precondition
            for v in vals:
                executability.extend(_parse_condition_list(v, params, fluents))
        i = j
    effects = tuple(
        EffectProposition(name, k, conds, eff)
        for k, (conds, eff) in enumerate(eps_raw)
    )
    seen_kp = set()
    kps = []
    for f, args in observes:
        if (f, args) in seen_kp:
            continue
        seen_kp.add((f, args))
        kps.append(KnowledgeProposition(name, f, args))
    return ActionSchema(
        name, params, effects, tuple(kps), tuple(executability), exogenous
    )


def _parse_domain(form):
    header = form[1]
    if not (isinstance(header, list) and len(header) == 2 and _is_tok(header[0], "domain")):
        _err("expected (domain <name>)", form)
    name = header[1].text
    types = []
    fluents = {}
    schema_forms = []
    for item in form[2:]:
        if not isinstance(item, list) or not item or not isinstance(item[0], _Tok):
            _err("malformed domain element", item)
        head = item[0].text.lower()
        if head == ":types":
            types.extend(t.text for t in item[1:] if isinstance(t, _Tok))
        elif head in (":fluents", ":predicates"):
            for decl in item[1:]:
                if isinstance(decl, _Tok):
                    fluents[decl.text] = ()
                    continue
                if not decl or not isinstance(decl[0], _Tok):
                    _err("malformed fluent declaration", decl)
                typed = _parse_typed_list(decl[1:], "fluent parameter")
                fluents[decl[0].text] = tuple(t for _, t in typed)
        elif head == ":action":
            schema_forms.append(item)
        else:
            _err(f"unknown domain element '{item[0].text}'", item)
    schemas = tuple(_parse_action(f, fluents, set(types)) for f in schema_forms)
    return Domain(name, tuple(types), fluents, schemas)


def _parse_problem(form):
    header = form[1]
    if not (isinstance(header, list) and len(header) == 2 and _is_tok(header[0], "problem")):
        _err("expected (problem <name>)", form)
    name = header[1].text
    objects = {}
    init = []
    oneofs = []
    weak_goals = []
    maintenance_goals = []
    for item in form[2:]:
        if not isinstance(item, list) or not item or not isinstance(item[0], _Tok):
            _err("malformed problem element", item)
        head = item[0].text.lower()
        if head == ":domain":
            continue
        if head == ":objects":
            for obj, typ in _parse_typed_list(item[1:], "object"):
                objects[obj] = typ
        elif head == ":init":
            for decl in item[1:]:
                if isinstance(decl, list) and decl and _is_tok(decl[0], "oneof"):
                    group = tuple(_parse_literal(x) for x in decl[1:])
                    if len(group) < 2:
                        _err("oneof needs at least two literals", decl)
                    oneofs.append(group)
                else:
                    init.append(_parse_literal(decl))
        elif head == ":goal":
            if len(item) < 3 or not isinstance(item[1], _Tok):
                _err("goal needs a kind (weak | maintenance)", item)
            kind = item[1].text.lower()
            lits = [_parse_literal(x) for x in item[2:]]
            if kind == "weak":
                weak_goals.extend(lits)
            elif kind == "maintenance":
                maintenance_goals.extend(lits)
            elif kind == "strong":
                _err("strong goals are not supported", item)
            else:
                _err(f"unknown goal kind '{item[1].text}'", item)
        else:
            _err(f"unknown problem element '{item[0].text}'", item)
    return ProblemSpec(
        name, objects, tuple(init), tuple(oneofs),
        tuple(weak_goals), tuple(maintenance_goals),
    )


def parse(text):
    """Parse combined domain+problem source into (Domain, ProblemSpec)."""
    forms = _read_sexprs(text)
    domain = None
    problem = None
    for form in forms:
        if not isinstance(form, list) or not form or not _is_tok(form[0], "define"):
            _err("top-level forms must be (define ...)", form)
        if len(form) < 2 or not isinstance(form[1], list) or not form[1]:
            _err("(define ...) needs a (domain ...) or (problem ...) header", form)
        head = form[1][0]
        if _is_tok(head, "domain"):
            domain = _parse_domain(form)
        elif _is_tok(head, "problem"):
            problem = _parse_problem(form)
        else:
            _err("expected (domain ...) or (problem ...)", form)
    if domain is None:
        raise ParseError("no domain definition found")
    if problem is None:
        problem = ProblemSpec("default", {}, (), (), (), ())
    _check_declarations(domain, problem)
    return domain, problem


def parse_files(domain_path, problem_path=None):
    with open(domain_path, encoding="utf-8") as fh:
        text = fh.read()
    if problem_path is not None:
        with open(problem_path, encoding="utf-8") as fh:
            text += "\n" + fh.read()
    return parse(text)


def _check_declarations(domain, problem):
    def check_lit(lit, where, params=None):
        if lit.fluent not in domain.fluents:
            raise ParseError(f"undeclared fluent '{lit.fluent}' in {where}")
        sig = domain.fluents[lit.fluent]
        if len(sig) != len(lit.args):
            raise ParseError(
                f"arity mismatch for fluent '{lit.fluent}' in {where}: "
                f"declared {len(sig)}, used {len(lit.args)}"
            )
        for arg, typ in zip(lit.args, sig):
            if arg.startswith("?"):
                if params is None or arg not in params:
                    raise ParseError(f"unbound variable '{arg}' in {where}")
                if typ != "object" and params[arg] != typ and params[arg] != "object":
                    raise ParseError(
                        f"type mismatch for '{arg}' in {where}: "
                        f"fluent wants {typ}, parameter is {params[arg]}"
                    )
            else:
                if arg in problem.objects and typ != "object":
                    if problem.objects[arg] != typ:
                        raise ParseError(
                            f"type mismatch for object '{arg}' in {where}"
                        )

    for schema in domain.schemas:
        params = dict(schema.parameters)
        where = f"action '{schema.name}'"
        for ep in schema.effects:
            check_lit(ep.effect, where, params)
            for c in ep.conditions:
                check_lit(c, where, params)
        for kp in schema.knowledge:
            check_lit(Literal(kp.fluent, kp.args), where, params)
        for lit in schema.executability:
            check_lit(lit, where, params)
    for lit in problem.init:
        check_lit(lit, ":init")
    for group in problem.oneofs:
        for lit in group:
            check_lit(lit, "oneof group")
    for lit in problem.weak_goals:
        check_lit(lit, ":goal weak")
    for lit in problem.maintenance_goals:
        check_lit(lit, ":goal maintenance")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def add(self, msg):
        self.violations.append(msg)


def validate(domain, problem, strict_exogenous=False):
    """Static checks beyond the grammar.  Report-based: never raises."""
    report = ValidationReport()
    for schema in domain.schemas:
        effect_atoms = set()
        for ep in schema.effects:
            effect_atoms.add((ep.effect.fluent, ep.effect.args))
        for kp in schema.knowledge:
            if (kp.fluent, kp.args) in effect_atoms:
                report.add(
                    f"action '{schema.name}' both senses and affects "
                    f"fluent '{kp.fluent}'"
                )
        if schema.exogenous and strict_exogenous:
            if len(schema.effects) > 1:
                report.add(
                    f"exogenous action '{schema.name}' has more than one "
                    "effect literal (strict mode)"
                )
            for ep in schema.effects:
                if ep.conditions:
                    report.add(
                        f"exogenous action '{schema.name}' has a conditional "
                        "effect (strict mode)"
                    )
    # exogenous ground instances must have pairwise disjoint effect literals
    try:
        gdom = ground(domain, problem, _skip_validate=True)
    except GroundingError as exc:
        report.add(str(exc))
        return report
    exo_effects = {}
    for act in sorted(gdom.actions.values(), key=lambda a: a.name):
        if not act.exogenous:
            continue
        for _, eff in act.eps:
            key = str(eff)
            if key in exo_effects and exo_effects[key] != act.name:
                report.add(
                    f"exogenous actions '{exo_effects[key]}' and '{act.name}' "
                    f"overlap on effect literal {key}"
                )
            exo_effects.setdefault(key, act.name)
    for name, typ in problem.objects.items():
        if typ not in domain.types and typ != "object":
            report.add(f"object '{name}' has undeclared type '{typ}'")
    return report


# ---------------------------------------------------------------------------
# Grounding
# ---------------------------------------------------------------------------

def ground(domain, problem, _skip_validate=False):
    """Naive Cartesian instantiation of all schemas over the object universe."""
    by_type = {}
    for obj, typ in problem.objects.items():
        by_type.setdefault(typ, []).append(obj)
    for typ in by_type:
        by_type[typ].sort()
    by_type["object"] = sorted(problem.objects)

    actions = {}
    fluent_atoms = set()

    def add_fluent(lit):
        fluent_atoms.add(lit.atom)

    for schema in domain.schemas:
        domains = []
        for var, typ in schema.parameters:
            pool = by_type.get(typ, [])
            if not pool:
                raise GroundingError(
                    f"no objects of type '{typ}' for parameter {var} of "
                    f"action '{schema.name}'"
                )
            domains.append(pool)
        for combo in itertools.product(*domains):
            binding = {
                var: obj for (var, _), obj in zip(schema.parameters, combo)
            }
            gname = schema.name
            if combo:
                gname = f"{schema.name}({','.join(combo)})"
            eps = []
            for ep in schema.effects:
                conds = tuple(c.substitute(binding) for c in ep.conditions)
                eff = ep.effect.substitute(binding)
                for lit in conds + (eff,):
                    add_fluent(lit)
                eps.append((conds, eff))
            kps = []
            for kp in schema.knowledge:
                lit = Literal(kp.fluent, kp.args).substitute(binding)
                add_fluent(lit)
                kps.append(lit.atom)
            exe = tuple(l.substitute(binding) for l in schema.executability)
            for lit in exe:
                add_fluent(lit)
            if gname in actions:
                raise GroundingError(f"duplicate ground action '{gname}'")
            actions[gname] = GroundAction(
                gname, tuple(eps), tuple(kps), exe, schema.exogenous
            )

    for lit in problem.init:
        add_fluent(lit)
    for group in problem.oneofs:
        for lit in group:
            add_fluent(lit)
    for lit in problem.weak_goals + problem.maintenance_goals:
        add_fluent(lit)
    # close the universe over declared fluents instantiated with objects, so
    # monitor fluents etc. exist even when no action mentions them
    for fname, sig in domain.fluents.items():
        pools = [by_type.get(t, []) for t in sig]
        if any(not p for p in pools):
            continue
        for combo in itertools.product(*pools):
            fluent_atoms.add(Literal(fname, tuple(combo)).atom)

    return GroundDomain(
        actions=actions,
        fluents=tuple(sorted(fluent_atoms)),
        weak_goals=problem.weak_goals,
        maintenance_goals=problem.maintenance_goals,
        init=problem.init,
        oneofs=problem.oneofs,
    )


# ---------------------------------------------------------------------------
# Pretty printer (round-trip support)
# ---------------------------------------------------------------------------

def _fmt_literal(lit):
    if lit.args:
        inner = f"({lit.fluent} {' '.join(lit.args)})"
    else:
        inner = lit.fluent
    return inner if lit.positive else f"(not {inner})"


def pretty_print(domain, problem):
    out = []
    out.append(f"(define (domain {domain.name})")
    if domain.types:
        out.append(f"  (:types {' '.join(domain.types)})")
    decls = []
    for fname, sig in domain.fluents.items():
        if sig:
            args = " ".join(f"?x{i} - {t}" for i, t in enumerate(sig))
            decls.append(f"({fname} {args})")
        else:
            decls.append(fname)
    if decls:
        out.append(f"  (:fluents {' '.join(decls)})")
    for schema in domain.schemas:
        out.append(f"  (:action {schema.name}")
        if schema.parameters:
            ps = " ".join(f"{v} - {t}" for v, t in schema.parameters)
            out.append(f"    :parameters ({ps})")
        if schema.exogenous:
            out.append("    :exogenous")
        if schema.executability:
            lits = " ".join(_fmt_literal(l) for l in schema.executability)
            out.append(f"    :executable (and {lits})")
        for ep in schema.effects:
            if ep.conditions:
                conds = " ".join(_fmt_literal(c) for c in ep.conditions)
                out.append(
                    f"    :effect (when (and {conds}) {_fmt_literal(ep.effect)})"
                )
            else:
                out.append(f"    :effect {_fmt_literal(ep.effect)}")
        for kp in schema.knowledge:
            out.append(f"    :observe {_fmt_literal(Literal(kp.fluent, kp.args))}")
        out.append("  )")
    out.append(")")
    out.append(f"(define (problem {problem.name})")
    if problem.objects:
        objs = " ".join(f"{o} - {t}" for o, t in sorted(problem.objects.items()))
        out.append(f"  (:objects {objs})")
    init_items = [_fmt_literal(l) for l in problem.init]
    init_items += [
        f"(oneof {' '.join(_fmt_literal(l) for l in group)})"
        for group in problem.oneofs
    ]
    if init_items:
        out.append(f"  (:init {' '.join(init_items)})")
    for g in problem.weak_goals:
        out.append(f"  (:goal weak {_fmt_literal(g)})")
    for g in problem.maintenance_goals:
        out.append(f"  (:goal maintenance {_fmt_literal(g)})")
    out.append(")")
    return "\n".join(out) + "\n"
