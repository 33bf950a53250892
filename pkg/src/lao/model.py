"""Semantic structures: worlds, labeled transitions, capability maps and
organization structures, plus the JSON model format, its loader and the
structural validator.

A loaded :class:`Model` is immutable (frozen sets throughout) and all
operations elsewhere in the package are pure functions of it, so models
are safe to share across threads.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


class ModelError(Exception):
    """Raised on malformed model files: syntax, unknown ids, duplicates."""


@dataclass(frozen=True)
class InChargeAtom:
    """Controllable fact 'org puts role in charge of fact'.

    True at a world iff the fact is in the role's objective set there.
    """

    org: str
    role: str
    fact: str


# A ControlAtom is either a plain fact name (str) or an InChargeAtom.


@dataclass(frozen=True)
class World:
    id: str
    facts: frozenset


@dataclass(frozen=True)
class Transition:
    src: str
    dst: str
    labels: frozenset  # of (agent, role) pairs


@dataclass(frozen=True)
class OrgStructure:
    """One organization: every component is indexed by world id."""

    id: str
    members: dict  # world -> frozenset[agent]
    roles: dict  # world -> frozenset[role]
    rea: dict  # world -> frozenset[(agent, role)]
    dep: dict  # world -> frozenset[(role, role)]
    desires: dict  # world -> frozenset[fact]
    objectives: dict  # world -> {role: frozenset[fact]}
    know_plus: dict  # world -> frozenset[fact]
    know_minus: dict  # world -> frozenset[fact]

    def obj(self, role, world):
        return self.objectives.get(world, {}).get(role, frozenset())


@dataclass(frozen=True)
class Model:
    facts: frozenset
    agents: frozenset
    roles: frozenset
    worlds: tuple  # of World, in file order
    transitions: tuple  # of Transition, merged per (src, dst)
    cap_c: dict  # agent -> world -> frozenset[ControlAtom]
    cap_cn: dict  # role -> world -> frozenset[ControlAtom]
    cap_cr: dict  # (agent, role) -> world -> frozenset[ControlAtom]
    orgs: dict  # org id -> OrgStructure
    totality: str  # "error" or "self-loop"
    world_ids: tuple = field(default=())
    valuation: dict = field(default_factory=dict)  # world -> frozenset[fact]
    succ: dict = field(default_factory=dict)  # world -> frozenset[world]
    out: dict = field(default_factory=dict)  # world -> tuple[Transition]

    def c(self, agent, world):
        return self.cap_c.get(agent, {}).get(world, frozenset())

    def cn(self, role, world):
        return self.cap_cn.get(role, {}).get(world, frozenset())

    def cr(self, agent, role, world):
        """Role-enacting capabilities; defined only where rea holds."""
        if not self.rea_any(world, agent, role):
            return frozenset()
        explicit = self.cap_cr.get((agent, role), {}).get(world)
        if explicit is not None:
            return explicit
        return self.c(agent, world)

    def rea_any(self, world, agent, role):
        """True iff some organization has agent enacting role at world."""
        return any((agent, role) in o.rea.get(world, ()) for o in self.orgs.values())

    def atom_true(self, atom, world):
        if isinstance(atom, InChargeAtom):
            org = self.orgs.get(atom.org)
            if org is None:
                return False
            return atom.fact in org.obj(atom.role, world)
        return atom in self.valuation[world]

    def digest(self):
        """Stable hash of the canonicalized model."""
        return hashlib.sha256(
            json.dumps(canonical_dict(self), sort_keys=True).encode()
        ).hexdigest()[:16]


@dataclass(frozen=True)
class Violation:
    invariant: str
    world: str
    detail: str

    def __str__(self):
        return f"{self.invariant} at {self.world}: {self.detail}"


# ---------------------------------------------------------------------------
# Loading


def _atom_from_json(raw, where):
    if isinstance(raw, str):
        return raw
    if isinstance(raw, dict) and set(raw) == {"incharge"}:
        inner = raw["incharge"]
        try:
            return InChargeAtom(inner["org"], inner["role"], inner["fact"])
        except (TypeError, KeyError):
            raise ModelError(f"{where}: malformed incharge atom {raw!r}")
    raise ModelError(f"{where}: atom must be a fact name or an incharge object, got {raw!r}")


def _per_world(raw, world_ids, convert, where):
    """Expand a {'default': ..., 'at': {world: ...}} entry (or bare default)."""
    if isinstance(raw, dict) and ("default" in raw or "at" in raw):
        default = raw.get("default", [])
        at = raw.get("at", {})
    else:
        default = raw
        at = {}
    out = {}
    default_value = convert(default)
    for w in world_ids:
        out[w] = default_value
    for w, entry in at.items():
        if w not in world_ids:
            raise ModelError(f"{where}: unknown world {w!r} in overrides")
        out[w] = convert(entry)
    return out


def _check_ids(kind, ids):
    seen = set()
    for x in ids:
        if not isinstance(x, str) or not x:
            raise ModelError(f"{kind} ids must be non-empty strings, got {x!r}")
        if x in seen:
            raise ModelError(f"duplicate {kind} id {x!r}")
        seen.add(x)


def reflexive_transitive_closure(pairs, domain):
    closed = set(pairs)
    closed.update((r, r) for r in domain)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(closed):
            for (c, d) in list(closed):
                if b == c and (a, d) not in closed:
                    closed.add((a, d))
                    changed = True
    return frozenset(closed)


def load_model(source):
    """Parse model JSON text into a validated-on-load Model.

    Raises ModelError on syntax errors (with line/position), unknown
    identifier references, duplicate ids, and totality violations under
    the "error" policy.
    """
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as e:
        raise ModelError(f"syntax error: {e.msg} at line {e.lineno}, column {e.colno}")
    if not isinstance(doc, dict):
        raise ModelError("model file must contain a JSON object")

    facts = doc.get("facts", [])
    agents = doc.get("agents", [])
    roles = doc.get("roles", [])
    _check_ids("fact", facts)
    _check_ids("agent", agents)
    _check_ids("role", roles)
    if not facts:
        raise ModelError("fact set non-empty violated: declare at least one fact")
    if not agents:
        raise ModelError("agent set non-empty violated: declare at least one agent")
    fact_set = frozenset(facts)
    agent_set = frozenset(agents)
    role_set = frozenset(roles)

    worlds_raw = doc.get("worlds", [])
    if not worlds_raw:
        raise ModelError("W non-empty violated: model declares zero worlds")
    _check_ids("world", [w.get("id") for w in worlds_raw])
    worlds = []
    for w in worlds_raw:
        wfacts = frozenset(w.get("facts", []))
        unknown = wfacts - fact_set
        if unknown:
            raise ModelError(f"world {w['id']!r}: unknown facts {sorted(unknown)}")
        worlds.append(World(w["id"], wfacts))
    world_ids = tuple(w.id for w in worlds)
    world_id_set = set(world_ids)

    def check_atom(atom, where):
        if isinstance(atom, InChargeAtom):
            if atom.org not in {o.get("id") for o in doc.get("orgs", [])}:
                raise ModelError(f"{where}: incharge atom names unknown org {atom.org!r}")
            if atom.role not in role_set:
                raise ModelError(f"{where}: incharge atom names unknown role {atom.role!r}")
            if atom.fact not in fact_set:
                raise ModelError(f"{where}: incharge atom names unknown fact {atom.fact!r}")
        elif atom not in fact_set:
            raise ModelError(f"{where}: unknown fact {atom!r} in capability set")

    def atoms(raw_list, where):
        if not isinstance(raw_list, list):
            raise ModelError(f"{where}: expected a list of atoms")
        out = frozenset(_atom_from_json(a, where) for a in raw_list)
        for a in out:
            check_atom(a, where)
        return out

    caps = doc.get("capabilities", {})
    cap_c = {}
    for agent, entry in caps.get("c", {}).items():
        if agent not in agent_set:
            raise ModelError(f"capabilities.c: unknown agent {agent!r}")
        cap_c[agent] = _per_world(entry, world_id_set, lambda v: atoms(v, f"c[{agent}]"), f"c[{agent}]")
    for agent in agent_set:
        cap_c.setdefault(agent, {w: frozenset() for w in world_ids})
    cap_cn = {}
    for role, entry in caps.get("cn", {}).items():
        if role not in role_set:
            raise ModelError(f"capabilities.cn: unknown role {role!r}")
        cap_cn[role] = _per_world(entry, world_id_set, lambda v: atoms(v, f"cn[{role}]"), f"cn[{role}]")
    for role in role_set:
        cap_cn.setdefault(role, {w: frozenset() for w in world_ids})
    cap_cr = {}
    for key, entry in caps.get("cr", {}).items():
        if ":" not in key:
            raise ModelError(f"capabilities.cr keys are 'agent:role', got {key!r}")
        agent, role = key.split(":", 1)
        if agent not in agent_set:
            raise ModelError(f"capabilities.cr: unknown agent {agent!r}")
        if role not in role_set:
            raise ModelError(f"capabilities.cr: unknown role {role!r}")
        cap_cr[(agent, role)] = _per_world(
            entry, world_id_set, lambda v: atoms(v, f"cr[{key}]"), f"cr[{key}]"
        )

    orgs = {}
    for raw in doc.get("orgs", []):
        oid = raw.get("id")
        if not oid:
            raise ModelError("every org needs an id")
        if oid in orgs:
            raise ModelError(f"duplicate org id {oid!r}")

        def id_list(v, allowed, what):
            out = frozenset(v)
            unknown = out - allowed
            if unknown:
                raise ModelError(f"org {oid!r}: unknown {what} {sorted(unknown)}")
            return out

        members = _per_world(
            raw.get("members", []), world_id_set,
            lambda v: id_list(v, agent_set, "agents"), f"org {oid} members",
        )
        oroles = _per_world(
            raw.get("roles", []), world_id_set,
            lambda v: id_list(v, role_set, "roles"), f"org {oid} roles",
        )

        def rea_list(v):
            out = set()
            for pair in v:
                if isinstance(pair, dict):
                    a, r = pair.get("agent"), pair.get("role")
                else:
                    a, r = pair
                if a not in agent_set:
                    raise ModelError(f"org {oid!r}: rea names unknown agent {a!r}")
                if r not in role_set:
                    raise ModelError(f"org {oid!r}: rea names unknown role {r!r}")
                out.add((a, r))
            return frozenset(out)

        rea = _per_world(raw.get("rea", []), world_id_set, rea_list, f"org {oid} rea")

        def dep_list(v):
            out = set()
            for pair in v:
                r, q = pair
                if r not in role_set or q not in role_set:
                    raise ModelError(f"org {oid!r}: dep names unknown role in {pair!r}")
                out.add((r, q))
            return frozenset(out)

        dep = _per_world(raw.get("dep", []), world_id_set, dep_list, f"org {oid} dep")
        if raw.get("depClosure", True):
            dep = {w: reflexive_transitive_closure(dep[w], oroles[w]) for w in dep}

        desires = _per_world(
            raw.get("desires", []), world_id_set,
            lambda v: id_list(v, fact_set, "facts"), f"org {oid} desires",
        )

        obj_raw = raw.get("objectives", {})
        per_role = {}
        for role, entry in obj_raw.items():
            if role not in role_set:
                raise ModelError(f"org {oid!r}: objectives name unknown role {role!r}")
            per_role[role] = _per_world(
                entry, world_id_set,
                lambda v: id_list(v, fact_set, "facts"), f"org {oid} objectives[{role}]",
            )
        objectives = {
            w: {role: per_role[role][w] for role in per_role} for w in world_ids
        }

        know_plus = _per_world(
            raw.get("knowPlus", []), world_id_set,
            lambda v: id_list(v, fact_set, "facts"), f"org {oid} knowPlus",
        )
        know_minus = _per_world(
            raw.get("knowMinus", []), world_id_set,
            lambda v: id_list(v, fact_set, "facts"), f"org {oid} knowMinus",
        )
        orgs[oid] = OrgStructure(
            oid, members, oroles, rea, dep, desires, objectives, know_plus, know_minus
        )

    # Re-check incharge atoms now that orgs are known (two-phase because the
    # first pass only saw raw org dicts).
    for holder_map in (cap_c, cap_cn):
        for per_world_map in holder_map.values():
            for w, atom_set in per_world_map.items():
                for a in atom_set:
                    if isinstance(a, InChargeAtom) and a.org not in orgs:
                        raise ModelError(f"incharge atom names unknown org {a.org!r}")

    merged = {}
    for raw in doc.get("transitions", []):
        src, dst = raw.get("from"), raw.get("to")
        if src not in world_id_set:
            raise ModelError(f"transition from unknown world {src!r}")
        if dst not in world_id_set:
            raise ModelError(f"transition to unknown world {dst!r}")
        labels = set()
        for lab in raw.get("labels", []):
            if isinstance(lab, dict):
                a, r = lab.get("agent"), lab.get("role")
            else:
                a, r = lab
            if a not in agent_set:
                raise ModelError(f"transition label names unknown agent {a!r}")
            if r not in role_set:
                raise ModelError(f"transition label names unknown role {r!r}")
            labels.add((a, r))
        merged.setdefault((src, dst), set()).update(labels)

    totality = doc.get("config", {}).get("totality", "error")
    if totality not in ("error", "self-loop"):
        raise ModelError(f"config.totality must be 'error' or 'self-loop', got {totality!r}")
    has_out = {src for (src, _dst) in merged}
    sinks = [w for w in world_ids if w not in has_out]
    if sinks:
        if totality == "error":
            raise ModelError(
                f"totality violated: worlds {sinks} have no outgoing transition "
                "(set config.totality to 'self-loop' to add unlabeled loops)"
            )
        for w in sinks:
            merged[(w, w)] = set()

    transitions = tuple(
        Transition(src, dst, frozenset(labels))
        for (src, dst), labels in sorted(merged.items())
    )

    model = Model(
        facts=fact_set,
        agents=agent_set,
        roles=role_set,
        worlds=tuple(worlds),
        transitions=transitions,
        cap_c=cap_c,
        cap_cn=cap_cn,
        cap_cr=cap_cr,
        orgs=orgs,
        totality=totality,
        world_ids=world_ids,
        valuation={w.id: w.facts for w in worlds},
        succ={
            w: frozenset(t.dst for t in transitions if t.src == w) for w in world_ids
        },
        out={
            w: tuple(t for t in transitions if t.src == w) for w in world_ids
        },
    )

    # Label soundness is a hard load error: a label outside every rea
    # relation names an act nobody may perform.
    for t in transitions:
        for (a, r) in t.labels:
            if not model.rea_any(t.src, a, r):
                raise ModelError(
                    f"label without rea: transition {t.src}->{t.dst} carries "
                    f"({a},{r}) but no organization has rea({t.src},{a},{r})"
                )
    return model


def load_model_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return load_model(fh.read())


# ---------------------------------------------------------------------------
# Validation


def validate_model(model):
    """Check every structural invariant; returns a list of Violations."""
    out = []
    for w in model.world_ids:
        if not model.succ.get(w):
            out.append(Violation("Totality", w, "world has no outgoing transition"))
    for t in model.transitions:
        for (a, r) in t.labels:
            if not model.rea_any(t.src, a, r):
                out.append(
                    Violation("LabelSoundness", t.src, f"label ({a},{r}) without rea")
                )
    for org in model.orgs.values():
        for w in model.world_ids:
            roles_w = org.roles.get(w, frozenset())
            members_w = org.members.get(w, frozenset())
            dep_w = org.dep.get(w, frozenset())
            for r in roles_w:
                if (r, r) not in dep_w:
                    out.append(
                        Violation("Reflexivity", w, f"org {org.id}: missing ({r},{r})")
                    )
            for (p, r) in dep_w:
                for (r2, q) in dep_w:
                    if r == r2 and (p, q) not in dep_w:
                        out.append(
                            Violation(
                                "Transitivity", w,
                                f"org {org.id}: ({p},{r}),({r},{q}) without ({p},{q})",
                            )
                        )
            for (r, q) in dep_w:
                if r not in roles_w or q not in roles_w:
                    out.append(
                        Violation("DepDomain", w, f"org {org.id}: ({r},{q}) outside roles")
                    )
            for (a, r) in org.rea.get(w, frozenset()):
                if a not in members_w or r not in roles_w:
                    out.append(
                        Violation(
                            "ReaDomain", w,
                            f"org {org.id}: rea ({a},{r}) outside members x roles",
                        )
                    )
                if not model.cn(r, w) <= model.c(a, w):
                    out.append(
                        Violation(
                            "NecessaryCapabilities", w,
                            f"org {org.id}: cn({r}) not within c({a})",
                        )
                    )
            for role, objs in org.objectives.get(w, {}).items():
                if not objs <= model.facts:
                    out.append(
                        Violation("ObjectiveDomain", w, f"org {org.id}: {role} objectives outside facts")
                    )
            kp = org.know_plus.get(w, frozenset())
            km = org.know_minus.get(w, frozenset())
            if not kp <= model.valuation[w]:
                out.append(
                    Violation(
                        "KnowledgeSoundness", w,
                        f"org {org.id}: K+ contains facts absent from the world: "
                        f"{sorted(kp - model.valuation[w])}",
                    )
                )
            if km & model.valuation[w]:
                out.append(
                    Violation(
                        "NegativeKnowledgeSoundness", w,
                        f"org {org.id}: K- contains facts true in the world: "
                        f"{sorted(km & model.valuation[w])}",
                    )
                )
    for (a, r), per_world in model.cap_cr.items():
        for w in model.world_ids:
            if per_world.get(w) and not model.rea_any(w, a, r):
                out.append(
                    Violation("CrWithoutRea", w, f"cr({a},{r}) defined without rea")
                )
            if model.rea_any(w, a, r) and not model.c(a, w) <= model.cr(a, r, w):
                out.append(
                    Violation("RoleExtraCapabilities", w, f"c({a}) not within cr({a},{r})")
                )
    return out


def close_dependencies(model):
    """Reflexive-transitive closure of every org's dep relation, per world.

    Idempotent; returns a new Model sharing everything else.
    """
    new_orgs = {}
    for oid, org in model.orgs.items():
        new_dep = {
            w: reflexive_transitive_closure(org.dep.get(w, frozenset()), org.roles.get(w, frozenset()))
            for w in model.world_ids
        }
        new_orgs[oid] = OrgStructure(
            org.id, org.members, org.roles, org.rea, new_dep,
            org.desires, org.objectives, org.know_plus, org.know_minus,
        )
    return Model(
        facts=model.facts,
        agents=model.agents,
        roles=model.roles,
        worlds=model.worlds,
        transitions=model.transitions,
        cap_c=model.cap_c,
        cap_cn=model.cap_cn,
        cap_cr=model.cap_cr,
        orgs=new_orgs,
        totality=model.totality,
        world_ids=model.world_ids,
        valuation=model.valuation,
        succ=model.succ,
        out=model.out,
    )


# ---------------------------------------------------------------------------
# Canonical form (digests, reports)


def _atom_json(a):
    if isinstance(a, InChargeAtom):
        return {"incharge": {"org": a.org, "role": a.role, "fact": a.fact}}
    return a


def _atom_key(a):
    return json.dumps(_atom_json(a), sort_keys=True)


def canonical_dict(model):
    """A canonical JSON-ready dict of the full model (stable ordering)."""
    return {
        "facts": sorted(model.facts),
        "agents": sorted(model.agents),
        "roles": sorted(model.roles),
        "worlds": [{"id": w.id, "facts": sorted(w.facts)} for w in model.worlds],
        "transitions": [
            {
                "from": t.src,
                "to": t.dst,
                "labels": [{"agent": a, "role": r} for (a, r) in sorted(t.labels)],
            }
            for t in model.transitions
        ],
        "capabilities": {
            "c": {
                a: {w: sorted((_atom_json(x) for x in per_w[w]), key=json.dumps) for w in sorted(per_w)}
                for a, per_w in sorted(model.cap_c.items())
            },
            "cn": {
                r: {w: sorted((_atom_json(x) for x in per_w[w]), key=json.dumps) for w in sorted(per_w)}
                for r, per_w in sorted(model.cap_cn.items())
            },
            "cr": {
                f"{a}:{r}": {w: sorted((_atom_json(x) for x in per_w[w]), key=json.dumps) for w in sorted(per_w)}
                for (a, r), per_w in sorted(model.cap_cr.items())
            },
        },
        "orgs": [
            {
                "id": org.id,
                "members": {w: sorted(org.members[w]) for w in sorted(org.members)},
                "roles": {w: sorted(org.roles[w]) for w in sorted(org.roles)},
                "rea": {w: sorted(map(list, org.rea[w])) for w in sorted(org.rea)},
                "dep": {w: sorted(map(list, org.dep[w])) for w in sorted(org.dep)},
                "desires": {w: sorted(org.desires[w]) for w in sorted(org.desires)},
                "objectives": {
                    w: {r: sorted(fs) for r, fs in sorted(org.objectives[w].items())}
                    for w in sorted(org.objectives)
                },
                "knowPlus": {w: sorted(org.know_plus[w]) for w in sorted(org.know_plus)},
                "knowMinus": {w: sorted(org.know_minus[w]) for w in sorted(org.know_minus)},
            }
            for org in sorted(model.orgs.values(), key=lambda o: o.id)
        ],
        "config": {"totality": model.totality},
    }
