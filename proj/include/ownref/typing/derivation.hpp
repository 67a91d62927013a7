#pragma once

#include "ownref/typing/templates.hpp"

#include <optional>
#include <variant>

namespace ownref::typing {

// The typing derivation of a program, flattened into obligations between
// template slices. Ownership and refinement constraints are both read off it.

struct TemplateRef {
  int point = 0;
  std::string var;     // kRet names the return template of the point's function
};

// Arguments substituted for a predicate's context and free-variable parameters.
struct Binding {
  std::vector<logic::Term> context;
  std::vector<logic::Term> fv;
};

// Levels [from, to] of a template; level == depth is the integer leaf.
struct Slice {
  TemplateRef ref;
  int from = 0, to = 0;
  Binding binding;
  std::optional<logic::Term> value;   // term for ν at the leaf, `$nu` if absent
};

struct Guard {
  int point = 0;                       // contributes ⟦Γ^point⟧
  std::vector<logic::Formula> facts;
};

// Conjunct added to a clause body only when `owner` is solved to a positive value.
struct Strengthening {
  int owner = -1;
  logic::Formula fact;
};

namespace ob {

// Subtyping src <: dst; without src, dst is defined by the guard alone.
struct Flow {
  Guard guard;
  std::optional<Slice> src;
  Slice dst;
  std::optional<Strengthening> strengthen;
};

// src = a + b
struct Split {
  Guard guard;
  Slice src, a, b;
  std::optional<Strengthening> strengthen_a;
};

// x + y ≈ x2 + y2
struct Shuffle {
  Guard guard;
  Slice x, y, x2, y2;
  int id = 0;
};

struct OwnOne {
  int owner = -1;
};

struct Goal {
  Guard guard;
  logic::Formula cond;
};

} // namespace ob

using Obligation = std::variant<ob::Flow, ob::Split, ob::Shuffle, ob::OwnOne, ob::Goal>;

struct Derivation {
  std::vector<Obligation> obligations;
  int shuffles = 0;
};

Derivation derive(const Program& p, const TemplateEnv& env);

Binding local_binding(const TemplateEnv& env, int point);
const TypeTemplate& resolve(const TemplateEnv& env, const TemplateRef& r);
// Context parameter names $c1..$ck.
std::vector<logic::Term> context_params(int k);
logic::Formula leaf_atom(const TemplateEnv& env, const TypeTemplate& t, const Binding& b,
                         const logic::Term& value);

} // namespace ownref::typing
