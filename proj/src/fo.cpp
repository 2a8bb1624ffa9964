#include "gapforge/fo.hpp"

#include <algorithm>
#include <set>

#include "gapforge/errors.hpp"

namespace gapforge::fo {

FormulaPtr truth(bool value) {
    auto f = std::make_shared<Formula>();
    f->kind = value ? Formula::Kind::True : Formula::Kind::False;
    return f;
}

FormulaPtr atom(std::string rel, std::vector<std::string> vars) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Atom;
    f->rel = std::move(rel);
    f->vars = std::move(vars);
    return f;
}

FormulaPtr eq(std::string a, std::string b) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Eq;
    f->vars = {std::move(a), std::move(b)};
    return f;
}

FormulaPtr neg(FormulaPtr f) {
    auto out = std::make_shared<Formula>();
    out->kind = Formula::Kind::Not;
    out->children = {std::move(f)};
    return out;
}

FormulaPtr conj(std::vector<FormulaPtr> fs) {
    if (fs.empty()) return truth(true);
    if (fs.size() == 1) return fs[0];
    auto out = std::make_shared<Formula>();
    out->kind = Formula::Kind::And;
    out->children = std::move(fs);
    return out;
}

FormulaPtr disj(std::vector<FormulaPtr> fs) {
    if (fs.empty()) return truth(false);
    if (fs.size() == 1) return fs[0];
    auto out = std::make_shared<Formula>();
    out->kind = Formula::Kind::Or;
    out->children = std::move(fs);
    return out;
}

FormulaPtr exists(std::string var, FormulaPtr f) {
    auto out = std::make_shared<Formula>();
    out->kind = Formula::Kind::Exists;
    out->bound = std::move(var);
    out->children = {std::move(f)};
    return out;
}

FormulaPtr forall(std::string var, FormulaPtr f) {
    auto out = std::make_shared<Formula>();
    out->kind = Formula::Kind::Forall;
    out->bound = std::move(var);
    out->children = {std::move(f)};
    return out;
}

namespace {

void free_vars_walk(const FormulaPtr& f, std::vector<std::string>& bound,
                    std::vector<std::string>& out) {
    auto is_bound = [&](const std::string& v) {
        return std::find(bound.begin(), bound.end(), v) != bound.end();
    };
    auto add = [&](const std::string& v) {
        if (!is_bound(v) && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    switch (f->kind) {
        case Formula::Kind::Atom:
        case Formula::Kind::Eq:
            for (const auto& v : f->vars) add(v);
            break;
        case Formula::Kind::Exists:
        case Formula::Kind::Forall:
            bound.push_back(f->bound);
            free_vars_walk(f->children[0], bound, out);
            bound.pop_back();
            break;
        default:
            for (const auto& c : f->children) free_vars_walk(c, bound, out);
    }
}

}  // namespace

std::vector<std::string> free_variables(const FormulaPtr& f) {
    std::vector<std::string> bound, out;
    free_vars_walk(f, bound, out);
    return out;
}

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, std::string>& renaming) {
    auto rn = [&](const std::string& v) {
        auto it = renaming.find(v);
        return it == renaming.end() ? v : it->second;
    };
    auto out = std::make_shared<Formula>(*f);
    switch (f->kind) {
        case Formula::Kind::Atom:
        case Formula::Kind::Eq:
            for (auto& v : out->vars) v = rn(v);
            break;
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            // Bound variables shadow: drop them from the renaming inside.
            auto inner = renaming;
            inner.erase(f->bound);
            out->children = {substitute(f->children[0], inner)};
            break;
        }
        default: {
            out->children.clear();
            for (const auto& c : f->children) out->children.push_back(substitute(c, renaming));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluator: variables resolved to frame slots; three-valued
// evaluation over partial frames; quantifier blocks evaluated by pruned DFS.

namespace {

struct Node {
    Formula::Kind kind;
    int rel = -1;
    std::vector<int> args;        // atom arguments or eq pair (slots)
    std::vector<int> block;       // quantifier block slots (collapsed chain)
    std::vector<int> children;
    std::vector<int> free_slots;  // outer slots this subtree reads, sorted
};

struct Compiled {
    std::vector<Node> nodes;
    int root = -1;
    int num_slots = 0;
    std::map<std::string, int> outer_slot;  // free variable name -> slot
};

struct CompileCtx {
    const Vocabulary* vocab;
    Compiled* out;
    std::vector<std::pair<std::string, int>> scope;  // bound stack

    int slot_of(const std::string& name) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == name) return it->second;
        auto found = out->outer_slot.find(name);
        if (found != out->outer_slot.end()) return found->second;
        int slot = out->num_slots++;
        out->outer_slot.emplace(name, slot);
        return slot;
    }
};

int compile_node(const FormulaPtr& f, CompileCtx& ctx) {
    Node node;
    node.kind = f->kind;
    std::set<int> free_acc;

    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
            break;
        case Formula::Kind::Atom: {
            node.rel = ctx.vocab->relation_index(f->rel);
            if (node.rel < 0) throw precondition_error("formula uses unknown relation " + f->rel);
            for (const auto& v : f->vars) {
                node.args.push_back(ctx.slot_of(v));
                free_acc.insert(node.args.back());
            }
            break;
        }
        case Formula::Kind::Eq:
            for (const auto& v : f->vars) {
                node.args.push_back(ctx.slot_of(v));
                free_acc.insert(node.args.back());
            }
            break;
        case Formula::Kind::Not:
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            for (const auto& c : f->children) {
                int id = compile_node(c, ctx);
                node.children.push_back(id);
                for (int s : ctx.out->nodes[static_cast<std::size_t>(id)].free_slots)
                    free_acc.insert(s);
            }
            break;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            // Collapse a maximal chain of same-kind quantifiers into a block.
            std::vector<int> block_slots;
            FormulaPtr body = f;
            std::size_t pushed = 0;
            while (body->kind == f->kind) {
                int slot = ctx.out->num_slots++;
                ctx.scope.emplace_back(body->bound, slot);
                ++pushed;
                block_slots.push_back(slot);
                body = body->children[0];
            }
            int id = compile_node(body, ctx);
            for (; pushed > 0; --pushed) ctx.scope.pop_back();
            node.block = block_slots;
            node.children.push_back(id);
            for (int s : ctx.out->nodes[static_cast<std::size_t>(id)].free_slots)
                if (std::find(block_slots.begin(), block_slots.end(), s) == block_slots.end())
                    free_acc.insert(s);
            break;
        }
    }
    node.free_slots.assign(free_acc.begin(), free_acc.end());
    ctx.out->nodes.push_back(std::move(node));
    return static_cast<int>(ctx.out->nodes.size()) - 1;
}

Compiled compile(const Structure& a, const FormulaPtr& f) {
    Compiled out;
    CompileCtx ctx{&a.vocab, &out, {}};
    out.root = compile_node(f, ctx);
    return out;
}

struct EvalCtx {
    const Structure* a;
    const Compiled* c;
    std::vector<int> frame;  // slot -> value, -1 unassigned
    std::uint64_t budget;
    std::uint64_t spent = 0;
    // Memo for quantifier nodes, keyed by the values of their free slots.
    std::map<std::pair<int, std::vector<int>>, bool> memo;

    void charge() {
        if (++spent > budget) throw capacity_error("fo: evaluation budget exhausted");
    }
};

int tv_eval(EvalCtx& ctx, int id);

// Pruned DFS over a quantifier block; returns the decided truth value.
bool quant_eval(EvalCtx& ctx, int id) {
    const Node& node = ctx.c->nodes[static_cast<std::size_t>(id)];
    const bool is_exists = node.kind == Formula::Kind::Exists;

    std::vector<int> key;
    key.reserve(node.free_slots.size());
    for (int s : node.free_slots) key.push_back(ctx.frame[static_cast<std::size_t>(s)]);
    if (auto it = ctx.memo.find({id, key}); it != ctx.memo.end()) return it->second;

    const int n = ctx.a->universe_size;
    bool result = !is_exists;
    std::function<bool(std::size_t)> walk = [&](std::size_t depth) -> bool {
        ctx.charge();
        int tv = tv_eval(ctx, node.children[0]);
        if (tv == 1) return true;    // exists: witness regardless of the rest; forall: subtree ok
        if (tv == -1) return false;  // exists: dead branch; forall: counterexample
        if (depth == node.block.size())
            throw consistency_error("fo: quantifier body undecided under a full assignment");
        int slot = node.block[depth];
        for (int v = 0; v < n; ++v) {
            ctx.frame[static_cast<std::size_t>(slot)] = v;
            bool sub = walk(depth + 1);
            ctx.frame[static_cast<std::size_t>(slot)] = -1;
            if (is_exists && sub) return true;
            if (!is_exists && !sub) return false;
        }
        return !is_exists;
    };
    result = walk(0);
    ctx.memo.try_emplace({id, std::move(key)}, result);
    return result;
}

int tv_eval(EvalCtx& ctx, int id) {
    const Node& node = ctx.c->nodes[static_cast<std::size_t>(id)];
    switch (node.kind) {
        case Formula::Kind::True:
            return 1;
        case Formula::Kind::False:
            return -1;
        case Formula::Kind::Eq: {
            int a = ctx.frame[static_cast<std::size_t>(node.args[0])];
            int b = ctx.frame[static_cast<std::size_t>(node.args[1])];
            if (node.args[0] == node.args[1]) return 1;
            if (a < 0 || b < 0) return 0;
            return a == b ? 1 : -1;
        }
        case Formula::Kind::Atom: {
            static thread_local std::vector<int> tuple;
            tuple.clear();
            for (int s : node.args) {
                int v = ctx.frame[static_cast<std::size_t>(s)];
                if (v < 0) return 0;
                tuple.push_back(v);
            }
            return ctx.a->holds(node.rel, tuple) ? 1 : -1;
        }
        case Formula::Kind::Not:
            return -tv_eval(ctx, node.children[0]);
        case Formula::Kind::And: {
            int acc = 1;
            for (int c : node.children) {
                int tv = tv_eval(ctx, c);
                if (tv == -1) return -1;
                acc = std::min(acc, tv);
            }
            return acc;
        }
        case Formula::Kind::Or: {
            int acc = -1;
            for (int c : node.children) {
                int tv = tv_eval(ctx, c);
                if (tv == 1) return 1;
                acc = std::max(acc, tv);
            }
            return acc;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            for (int s : node.free_slots)
                if (ctx.frame[static_cast<std::size_t>(s)] < 0) return 0;
            return quant_eval(ctx, id) ? 1 : -1;
        }
    }
    return 0;
}

// Compile once, evaluate many times; the quantifier memo persists across
// calls (it is keyed by the free-slot values).
class Evaluator {
  public:
    Evaluator(const Structure& a, const FormulaPtr& f, std::uint64_t budget = 500'000'000)
        : compiled_(compile(a, f)), ctx_{&a, &compiled_, {}, budget, 0, {}} {
        ctx_.frame.assign(static_cast<std::size_t>(compiled_.num_slots), -1);
    }

    bool operator()(const Assignment& assignment) {
        for (const auto& [name, slot] : compiled_.outer_slot) {
            auto it = assignment.find(name);
            if (it == assignment.end()) throw precondition_error("eval: unbound variable " + name);
            if (it->second < 0 || it->second >= ctx_.a->universe_size)
                throw precondition_error("eval: assignment outside the universe");
            ctx_.frame[static_cast<std::size_t>(slot)] = it->second;
        }
        int tv = tv_eval(ctx_, compiled_.root);
        for (const auto& [name, slot] : compiled_.outer_slot)
            ctx_.frame[static_cast<std::size_t>(slot)] = -1;
        if (tv == 0) throw consistency_error("eval: undecided with a full assignment");
        return tv == 1;
    }

    // Slot of a free variable, or -1 when the formula never reads it.
    int slot_for(const std::string& name) const {
        auto it = compiled_.outer_slot.find(name);
        return it == compiled_.outer_slot.end() ? -1 : it->second;
    }

    // Fast path: bindings resolved to slots up front (-1 entries skipped).
    bool eval_with(const std::vector<std::pair<int, int>>& slot_values) {
        for (auto [slot, value] : slot_values)
            if (slot >= 0) ctx_.frame[static_cast<std::size_t>(slot)] = value;
        int tv = tv_eval(ctx_, compiled_.root);
        for (auto [slot, value] : slot_values)
            if (slot >= 0) ctx_.frame[static_cast<std::size_t>(slot)] = -1;
        if (tv == 0) throw consistency_error("eval: undecided with a full assignment");
        return tv == 1;
    }

  private:
    Compiled compiled_;
    EvalCtx ctx_;
};

}  // namespace

bool eval(const Structure& a, const FormulaPtr& f, const Assignment& assignment) {
    a.validate();
    Evaluator ev(a, f);
    return ev(assignment);
}

void enumerate_satisfying(const Structure& a, const FormulaPtr& f,
                          const std::vector<std::string>& vars, const Assignment& fixed,
                          const std::function<void(const std::vector<int>&)>& fn,
                          std::uint64_t budget) {
    a.validate();
    Compiled c = compile(a, f);
    EvalCtx ctx{&a, &c, {}, budget, 0, {}};

    // Requested variables may be absent from the formula; give them slots so
    // the enumeration still ranges over them.
    std::vector<int> var_slots;
    for (const auto& v : vars) {
        auto it = c.outer_slot.find(v);
        if (it == c.outer_slot.end())
            it = c.outer_slot.emplace(v, c.num_slots++).first;
        var_slots.push_back(it->second);
    }
    ctx.frame.assign(static_cast<std::size_t>(c.num_slots), -1);
    for (const auto& [name, slot] : c.outer_slot) {
        if (std::find(vars.begin(), vars.end(), name) != vars.end()) continue;
        auto it = fixed.find(name);
        if (it == fixed.end()) throw precondition_error("enumerate: unbound variable " + name);
        ctx.frame[static_cast<std::size_t>(slot)] = it->second;
    }

    const int n = a.universe_size;
    std::vector<int> values(vars.size(), 0);
    // Once the formula is decided true, the remaining variables range freely.
    std::function<void(std::size_t)> fill = [&](std::size_t depth) {
        if (depth == vars.size()) {
            fn(values);
            return;
        }
        for (int v = 0; v < n; ++v) {
            values[depth] = v;
            fill(depth + 1);
        }
    };
    std::function<void(std::size_t)> walk = [&](std::size_t depth) {
        ctx.charge();
        int tv = tv_eval(ctx, c.root);
        if (tv == -1) return;
        if (tv == 1) {
            fill(depth);
            return;
        }
        if (depth == vars.size())
            throw consistency_error("enumerate: undecided with a full assignment");
        for (int v = 0; v < n; ++v) {
            ctx.frame[static_cast<std::size_t>(var_slots[depth])] = v;
            values[depth] = v;
            walk(depth + 1);
        }
        ctx.frame[static_cast<std::size_t>(var_slots[depth])] = -1;
    };
    walk(0);
}

BigInt count_satisfying(const Structure& a, const FormulaPtr& f,
                        const std::vector<std::string>& vars, const Assignment& fixed,
                        std::uint64_t budget) {
    BigInt count(0);
    enumerate_satisfying(a, f, vars, fixed, [&](const std::vector<int>&) { count += BigInt(1); },
                         budget);
    return count;
}

// ---------------------------------------------------------------------------
// Interpretations

std::string var_x(int i) { return "x" + std::to_string(i); }
std::string var_y(int i) { return "y" + std::to_string(i); }
std::string var_t(int arg, int i) { return "t" + std::to_string(arg) + "_" + std::to_string(i); }

AppliedInterpretation apply_interpretation(const Interpretation& theta, const Structure& a,
                                           std::uint64_t budget) {
    a.validate();
    theta.target.validate();
    if (theta.relation_formulas.size() != theta.target.relations.size() ||
        theta.constant_formulas.size() != theta.target.constants.size())
        throw precondition_error("interpretation: one formula per target symbol required");
    const int d = theta.dimension;

    std::vector<std::string> xs, ys;
    for (int i = 0; i < d; ++i) {
        xs.push_back(var_x(i));
        ys.push_back(var_y(i));
    }

    std::vector<std::vector<int>> tuples;
    enumerate_satisfying(a, theta.delta, xs, {}, [&](const std::vector<int>& t) {
        tuples.push_back(t);
    }, budget);

    Evaluator eps_eval(a, theta.eps);
    std::vector<int> eps_x_slots, eps_y_slots;
    for (int i = 0; i < d; ++i) {
        eps_x_slots.push_back(eps_eval.slot_for(xs[static_cast<std::size_t>(i)]));
        eps_y_slots.push_back(eps_eval.slot_for(ys[static_cast<std::size_t>(i)]));
    }
    std::vector<std::pair<int, int>> eps_bindings(static_cast<std::size_t>(2 * d));
    auto eps_holds = [&](const std::vector<int>& s, const std::vector<int>& t) {
        for (int i = 0; i < d; ++i) {
            eps_bindings[static_cast<std::size_t>(i)] = {eps_x_slots[static_cast<std::size_t>(i)],
                                                         s[static_cast<std::size_t>(i)]};
            eps_bindings[static_cast<std::size_t>(d + i)] = {
                eps_y_slots[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(i)]};
        }
        return eps_eval.eval_with(eps_bindings);
    };

    // Quotient by eps against class representatives, verifying along the way
    // that eps behaves like an equivalence.
    AppliedInterpretation out;
    std::vector<std::vector<std::vector<int>>> members;  // per class, non-representatives
    std::vector<int> class_of(tuples.size(), -1);
    for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
        const auto& t = tuples[ti];
        if (!eps_holds(t, t)) throw precondition_error("interpretation: eps is not reflexive");
        int hit = -1;
        for (std::size_t r = 0; r < out.representatives.size(); ++r) {
            if (eps_holds(t, out.representatives[r])) {
                if (hit >= 0)
                    throw precondition_error("interpretation: eps is not an equivalence");
                if (!eps_holds(out.representatives[r], t))
                    throw precondition_error("interpretation: eps is not symmetric");
                hit = static_cast<int>(r);
            }
        }
        if (hit < 0) {
            hit = static_cast<int>(out.representatives.size());
            out.representatives.push_back(t);
            members.emplace_back();
        } else {
            members[static_cast<std::size_t>(hit)].push_back(t);
        }
        class_of[ti] = hit;
    }

    const int size = static_cast<int>(out.representatives.size());
    out.output.vocab = theta.target;
    out.output.universe_size = size;
    out.output.relations.resize(theta.target.relations.size());
    out.output.constants.resize(theta.target.constants.size());

    // Relations over class representatives, with a congruence check against a
    // few alternative members per argument.
    constexpr std::size_t kAlternatesPerClass = 2;
    for (std::size_t r = 0; r < theta.target.relations.size(); ++r) {
        const int ar = theta.target.relations[r].arity;
        const auto& phi = theta.relation_formulas[r];
        Evaluator phi_eval(a, phi);
        std::vector<std::vector<int>> arg_slots(static_cast<std::size_t>(ar));
        for (int g = 0; g < ar; ++g)
            for (int i = 0; i < d; ++i)
                arg_slots[static_cast<std::size_t>(g)].push_back(phi_eval.slot_for(var_t(g, i)));
        std::vector<std::pair<int, int>> bindings(static_cast<std::size_t>(ar * d));
        auto bind_arg = [&](int g, const std::vector<int>& tuple) {
            for (int i = 0; i < d; ++i)
                bindings[static_cast<std::size_t>(g * d + i)] = {
                    arg_slots[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)],
                    tuple[static_cast<std::size_t>(i)]};
        };

        std::vector<int> args(static_cast<std::size_t>(ar), 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == ar) {
                for (int g = 0; g < ar; ++g)
                    bind_arg(g, out.representatives[static_cast<std::size_t>(
                                    args[static_cast<std::size_t>(g)])]);
                bool holds = phi_eval.eval_with(bindings);
                for (int g = 0; g < ar; ++g) {
                    const auto& alts =
                        members[static_cast<std::size_t>(args[static_cast<std::size_t>(g)])];
                    for (std::size_t alt = 0; alt < std::min(alts.size(), kAlternatesPerClass);
                         ++alt) {
                        bind_arg(g, alts[alt]);
                        bool same = phi_eval.eval_with(bindings);
                        if (same != holds)
                            throw precondition_error(
                                "interpretation: eps is not a congruence for " +
                                theta.target.relations[r].name);
                    }
                    bind_arg(g, out.representatives[static_cast<std::size_t>(
                                    args[static_cast<std::size_t>(g)])]);
                }
                if (holds) out.output.relations[r].push_back(args);
                return;
            }
            for (int c = 0; c < size; ++c) {
                args[static_cast<std::size_t>(pos)] = c;
                rec(pos + 1);
            }
        };
        rec(0);
    }
    for (std::size_t cix = 0; cix < theta.target.constants.size(); ++cix) {
        int found = -1;
        Evaluator const_eval(a, theta.constant_formulas[cix]);
        for (int cls = 0; cls < size; ++cls) {
            Assignment asg;
            for (int i = 0; i < d; ++i)
                asg[xs[static_cast<std::size_t>(i)]] =
                    out.representatives[static_cast<std::size_t>(cls)][static_cast<std::size_t>(i)];
            if (const_eval(asg)) {
                if (found >= 0)
                    throw precondition_error("interpretation: constant formula not functional");
                found = cls;
            }
        }
        if (found < 0) throw precondition_error("interpretation: constant formula has no value");
        out.output.constants[cix] = found;
    }
    out.output.normalize();
    out.output.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Isomorphism: colour refinement plus backtracking.

namespace {

// Incidence-based colour refinement; sound for arbitrary arities.
std::vector<int> iso_refine(const Structure& a) {
    const int n = a.universe_size;
    std::vector<int> colour(static_cast<std::size_t>(n), 0);
    for (std::size_t c = 0; c < a.constants.size(); ++c)
        colour[static_cast<std::size_t>(a.constants[c])] += static_cast<int>(c) + 1;

    int classes = 0;
    while (true) {
        std::vector<std::vector<long long>> sigs(static_cast<std::size_t>(n));
        for (int e = 0; e < n; ++e) sigs[static_cast<std::size_t>(e)].push_back(colour[static_cast<std::size_t>(e)]);
        for (std::size_t r = 0; r < a.relations.size(); ++r) {
            for (const auto& t : a.relations[r]) {
                long long code = static_cast<long long>(r);
                for (int e : t) code = code * 7919 + colour[static_cast<std::size_t>(e)] + 1;
                for (std::size_t p = 0; p < t.size(); ++p)
                    sigs[static_cast<std::size_t>(t[p])].push_back(
                        code * 31 + static_cast<long long>(p));
            }
        }
        for (auto& s : sigs) std::sort(s.begin() + 1, s.end());
        std::map<std::vector<long long>, int> ids;
        for (const auto& s : sigs) ids[s] = 0;
        int next = 0;
        for (auto& [sig, id] : ids) id = next++;
        std::vector<int> refined(static_cast<std::size_t>(n));
        for (int e = 0; e < n; ++e) refined[static_cast<std::size_t>(e)] = ids.at(sigs[static_cast<std::size_t>(e)]);
        if (next == classes) break;
        classes = next;
        colour = std::move(refined);
    }
    return colour;
}

}  // namespace

bool isomorphic(const Structure& a, const Structure& b, std::uint64_t node_budget) {
    a.validate();
    b.validate();
    if (!(a.vocab == b.vocab)) return false;
    if (a.universe_size != b.universe_size) return false;
    if (a.universe_size > 4096) throw capacity_error("isomorphic: universe too large");
    for (std::size_t r = 0; r < a.relations.size(); ++r)
        if (a.relations[r].size() != b.relations[r].size()) return false;

    const int n = a.universe_size;
    std::vector<int> col_a = iso_refine(a), col_b = iso_refine(b);
    {
        std::map<int, int> ha, hb;
        for (int c : col_a) ++ha[c];
        for (int c : col_b) ++hb[c];
        if (ha != hb) return false;
    }

    // Index: per element, incident (relation, tuple index) pairs.
    std::vector<std::vector<std::pair<int, int>>> incident(static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < a.relations.size(); ++r)
        for (std::size_t t = 0; t < a.relations[r].size(); ++t)
            for (int e : a.relations[r][t])
                incident[static_cast<std::size_t>(e)].emplace_back(static_cast<int>(r),
                                                                   static_cast<int>(t));

    // Order: smallest colour classes first, constants first of all.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::map<int, int> class_size;
    for (int c : col_a) ++class_size[c];
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return std::pair(class_size[col_a[static_cast<std::size_t>(x)]], x) <
               std::pair(class_size[col_a[static_cast<std::size_t>(y)]], y);
    });

    std::vector<int> image(static_cast<std::size_t>(n), -1), used(static_cast<std::size_t>(n), 0);
    for (std::size_t c = 0; c < a.constants.size(); ++c) {
        int ea = a.constants[c], eb = b.constants[c];
        if (image[static_cast<std::size_t>(ea)] == -1) {
            if (col_a[static_cast<std::size_t>(ea)] != col_b[static_cast<std::size_t>(eb)])
                return false;
            image[static_cast<std::size_t>(ea)] = eb;
            used[static_cast<std::size_t>(eb)] = 1;
        } else if (image[static_cast<std::size_t>(ea)] != eb) {
            return false;
        }
    }

    std::uint64_t nodes = 0;
    std::function<bool(std::size_t)> rec = [&](std::size_t depth) -> bool {
        if (++nodes > node_budget) throw capacity_error("isomorphic: search budget exhausted");
        while (depth < order.size() && image[static_cast<std::size_t>(order[depth])] != -1)
            ++depth;
        if (depth == order.size()) return true;
        int e = order[depth];
        for (int f = 0; f < n; ++f) {
            if (used[static_cast<std::size_t>(f)]) continue;
            if (col_a[static_cast<std::size_t>(e)] != col_b[static_cast<std::size_t>(f)]) continue;
            image[static_cast<std::size_t>(e)] = f;
            used[static_cast<std::size_t>(f)] = 1;
            bool ok = true;
            std::vector<int> mapped;
            for (auto [r, t] : incident[static_cast<std::size_t>(e)]) {
                const auto& tup = a.relations[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)];
                mapped.clear();
                bool complete = true;
                for (int x : tup) {
                    int ix = image[static_cast<std::size_t>(x)];
                    if (ix < 0) {
                        complete = false;
                        break;
                    }
                    mapped.push_back(ix);
                }
                if (complete && !b.holds(r, mapped)) {
                    ok = false;
                    break;
                }
            }
            if (ok && rec(depth + 1)) return true;
            image[static_cast<std::size_t>(e)] = -1;
            used[static_cast<std::size_t>(f)] = 0;
        }
        return false;
    };
    return rec(0);
}

// ---------------------------------------------------------------------------
// Vocabulary adapters

std::string perm_name(const games::Permutation& p) {
    std::string out;
    for (int v : p) out += std::to_string(v);
    return out;
}

Structure xor3_structure(const xor3::Instance& inst) {
    inst.validate();
    Structure s;
    s.vocab.relations = {{"Eq0", 3}, {"Eq1", 3}};
    s.universe_size = inst.num_vars;
    s.relations.resize(2);
    for (const auto& e : inst.equations)
        s.relations[static_cast<std::size_t>(e.b)].push_back({e.x, e.y, e.z});
    s.normalize();
    return s;
}

std::string label_symbol(const games::ConstraintLabel& c) {
    if (const auto* one = std::get_if<games::OneToOne>(&c)) return "C1_" + perm_name(one->pi);
    const auto& two = std::get<games::TwoToTwo>(c);
    return "C2_" + perm_name(two.pi1) + "_" + perm_name(two.pi2);
}

namespace {

void ensure_relation(Structure& s, const std::string& name, int arity) {
    if (s.vocab.relation_index(name) >= 0) return;
    s.vocab.relations.push_back({name, arity});
    s.relations.emplace_back();
}

}  // namespace

Structure transitive_game_structure(const games::Game& g) {
    g.validate();
    Structure s;
    s.universe_size = g.num_vertices;
    for (const auto& e : g.edges) {
        auto fwd = label_symbol(e.c);
        auto bwd = label_symbol(games::inverse_label(e.c, g.q));
        ensure_relation(s, fwd, 2);
        ensure_relation(s, bwd, 2);
        s.relations[static_cast<std::size_t>(s.vocab.relation_index(fwd))].push_back({e.u, e.v});
        s.relations[static_cast<std::size_t>(s.vocab.relation_index(bwd))].push_back({e.v, e.u});
    }
    s.normalize();
    return s;
}

Structure weighted_game_structure(const games::Game& g) {
    g.validate();
    Structure s;
    s.universe_size = g.num_vertices + static_cast<int>(g.edges.size());
    ensure_relation(s, "C", 1);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (!std::holds_alternative<games::TwoToTwo>(e.c))
            throw precondition_error("weighted_game_structure: all constraints must be 2-to-2");
        int c_elem = g.num_vertices + static_cast<int>(i);
        s.relations[0].push_back({c_elem});
        auto name = "Phi_" + perm_name(std::get<games::TwoToTwo>(e.c).pi1) + "_" +
                    perm_name(std::get<games::TwoToTwo>(e.c).pi2);
        ensure_relation(s, name, 3);
        s.relations[static_cast<std::size_t>(s.vocab.relation_index(name))].push_back(
            {e.u, e.v, c_elem});
    }
    s.normalize();
    return s;
}

Structure unique_game_structure(const games::Game& g) {
    g.validate();
    Structure s;
    s.universe_size = g.num_vertices + static_cast<int>(g.edges.size());
    ensure_relation(s, "C", 1);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (!std::holds_alternative<games::OneToOne>(e.c))
            throw precondition_error("unique_game_structure: all constraints must be 1-to-1");
        int c_elem = g.num_vertices + static_cast<int>(i);
        s.relations[0].push_back({c_elem});
        auto name = "Phi_" + perm_name(std::get<games::OneToOne>(e.c).pi);
        ensure_relation(s, name, 3);
        s.relations[static_cast<std::size_t>(s.vocab.relation_index(name))].push_back(
            {e.u, e.v, c_elem});
    }
    s.normalize();
    return s;
}

Structure graph_structure(int n, const std::vector<std::pair<int, int>>& edges, bool directed) {
    Structure s;
    s.vocab.relations = {{"E", 2}};
    s.universe_size = n;
    s.relations.resize(1);
    for (auto [u, v] : edges) {
        s.relations[0].push_back({u, v});
        if (!directed) s.relations[0].push_back({v, u});
    }
    s.normalize();
    s.validate();
    return s;
}

void harmonize_vocabularies(Structure& a, Structure& b) {
    std::map<std::string, int> arity;
    for (const auto& r : a.vocab.relations) arity[r.name] = r.arity;
    for (const auto& r : b.vocab.relations) {
        auto [it, inserted] = arity.try_emplace(r.name, r.arity);
        if (!inserted && it->second != r.arity)
            throw precondition_error("harmonize: arity clash for " + r.name);
    }
    auto rebuild = [&](Structure& s) {
        Structure out;
        out.universe_size = s.universe_size;
        out.constants = s.constants;
        out.vocab.constants = s.vocab.constants;
        for (const auto& [name, ar] : arity) {
            out.vocab.relations.push_back({name, ar});
            int idx = s.vocab.relation_index(name);
            out.relations.push_back(idx >= 0 ? s.relations[static_cast<std::size_t>(idx)]
                                             : std::vector<std::vector<int>>{});
        }
        s = std::move(out);
    };
    rebuild(a);
    rebuild(b);
}

}  // namespace gapforge::fo
