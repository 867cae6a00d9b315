#pragma once

// Big-step interpreters for the IMP family, each with fuel (a bound on
// accumulated step cost) and a step count in the outcome.
//
//   run_imptc    whole-program execution; RECURSE re-enters the program
//   run_flagged  runs to the first RECURSE and stops with flag 1; a flag-1
//                outcome composed with a run of the full program reproduces
//                the plain run exactly *when RECURSE sites are terminal*
//                (nothing sequenced after them) — the compiler only emits such
//                programs. For other programs the runner still totalizes by
//                skipping the rest of a sequence.
//   run_impwc    While + Call, no Recurse
//   run_impw     While only
//   run_impminus single-bit registers, fixed cost model; interned and run
//                over a flat arena for speed

#include "rcc/error.hpp"
#include "rcc/imp.hpp"
#include "rcc/nat.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace rcc {

inline Nat aval_atom(const Atom& a, const State& s) { return a.is_const ? a.n : s.get(a.reg); }

inline Nat aval(const AExp& e, const State& s) {
    switch (e.kind) {
    case AExp::K::Atom:
        return aval_atom(e.a, s);
    case AExp::K::Add:
        return aval_atom(e.a, s) + aval_atom(e.b, s);
    case AExp::K::Sub:
        return monus(aval_atom(e.a, s), aval_atom(e.b, s));
    }
    throw Error("unreachable AExp kind");
}

namespace detail {

struct ImpRunner {
    const Command* ctx = nullptr; // RECURSE target (the whole program)
    CostModel cm;
    std::uint64_t fuel;
    std::uint64_t steps = 0;
    std::uint64_t nodes = 0, node_budget = 0;
    int depth = 0;
    static constexpr int kMaxDepth = 6000;

    void burn(std::uint64_t c) {
        steps += c;
        if (steps > fuel) throw FuelError("step budget exhausted");
        if (++nodes > node_budget) throw FuelError("node budget exhausted");
    }

    void enter() {
        if (++depth > kMaxDepth) {
            --depth;
            throw FuelError("nesting/recursion depth exceeded");
        }
    }
    void leave() { --depth; }

    void exec(const Command& c0, State& s) {
        const Command* c = &c0;
        // Right spines of Seq run iteratively so chain length never costs
        // C++ stack.
        while (true) {
            switch (c->kind) {
            case Command::K::Assign:
                burn(cm.assign);
                s.set(c->reg, aval(c->e, s));
                return;
            case Command::K::AssignBit:
                burn(cm.assign);
                s.set(c->reg, Nat(c->bit ? 1 : 0));
                return;
            case Command::K::Seq:
                burn(cm.seq);
                enter();
                exec(*c->a, s);
                leave();
                c = c->b.get();
                continue;
            case Command::K::If:
                burn(cm.if_);
                c = (s.get(c->reg) != 0 ? c->a : c->b).get();
                continue;
            case Command::K::While: {
                while (true) {
                    if (s.get(c->reg) == 0) {
                        burn(cm.while_false);
                        return;
                    }
                    burn(cm.while_true);
                    enter();
                    exec(*c->a, s);
                    leave();
                }
            }
            case Command::K::Call: {
                burn(cm.call);
                State callee = s;
                enter();
                exec(*c->a, callee);
                leave();
                // Only the named result register survives the call.
                s.set(c->reg, callee.get(c->reg));
                return;
            }
            case Command::K::Recurse: {
                burn(cm.recurse);
                if (!ctx) throw Error("recurse outside a recursive program");
                enter();
                exec(*ctx, s);
                leave();
                return;
            }
            }
        }
    }
};

struct FlaggedRunner {
    CostModel cm;
    std::uint64_t fuel;
    std::uint64_t steps = 0;
    std::uint64_t nodes = 0, node_budget = 0;
    int depth = 0;
    static constexpr int kMaxDepth = 6000;

    void burn(std::uint64_t c) {
        steps += c;
        if (steps > fuel) throw FuelError("step budget exhausted");
        if (++nodes > node_budget) throw FuelError("node budget exhausted");
    }

    void enter() {
        if (++depth > kMaxDepth) {
            --depth;
            throw FuelError("nesting depth exceeded");
        }
    }
    void leave() { --depth; }

    // Returns the flag: true once a RECURSE has been reached.
    bool exec(const Command& c0, State& s) {
        const Command* c = &c0;
        while (true) {
            switch (c->kind) {
            case Command::K::Assign:
                burn(cm.assign);
                s.set(c->reg, aval(c->e, s));
                return false;
            case Command::K::AssignBit:
                burn(cm.assign);
                s.set(c->reg, Nat(c->bit ? 1 : 0));
                return false;
            case Command::K::Seq: {
                burn(cm.seq);
                enter();
                bool f = exec(*c->a, s);
                leave();
                // The sequencing rule wants flag 0 on the left; a raised flag
                // skips the right component.
                if (f) return true;
                c = c->b.get();
                continue;
            }
            case Command::K::If:
                burn(cm.if_);
                c = (s.get(c->reg) != 0 ? c->a : c->b).get();
                continue;
            case Command::K::While: {
                while (true) {
                    if (s.get(c->reg) == 0) {
                        burn(cm.while_false);
                        return false;
                    }
                    burn(cm.while_true);
                    enter();
                    bool f = exec(*c->a, s);
                    leave();
                    if (f) return true;
                }
            }
            case Command::K::Call: {
                burn(cm.call);
                State callee = s;
                enter();
                bool f = exec(*c->a, callee);
                leave();
                if (f) throw Error("recurse inside a callee");
                s.set(c->reg, callee.get(c->reg));
                return false;
            }
            case Command::K::Recurse:
                burn(cm.recurse);
                return true;
            }
        }
    }
};

} // namespace detail

inline ExecOutcome run_imptc(const Command& p, const State& s, const CostModel& cm,
                             std::uint64_t fuel) {
    if (auto why = wf_violation(p, Lang::imptc)) throw Error(*why);
    detail::ImpRunner r;
    r.ctx = &p;
    r.cm = cm;
    r.fuel = fuel;
    r.node_budget = 2 * fuel + 1024;
    State out = s;
    r.exec(p, out);
    return {std::move(out), r.steps};
}

inline FlaggedOutcome run_flagged(const Command& p, const State& s, const CostModel& cm,
                                  std::uint64_t fuel) {
    if (auto why = wf_violation(p, Lang::imptc)) throw Error(*why);
    detail::FlaggedRunner r;
    r.cm = cm;
    r.fuel = fuel;
    r.node_budget = 2 * fuel + 1024;
    State out = s;
    bool f = r.exec(p, out);
    return {std::move(out), r.steps, f};
}

inline ExecOutcome run_impwc(const Command& p, const State& s, const CostModel& cm,
                             std::uint64_t fuel) {
    if (auto why = wf_violation(p, Lang::impwc)) throw Error(*why);
    detail::ImpRunner r;
    r.cm = cm;
    r.fuel = fuel;
    r.node_budget = 2 * fuel + 1024;
    State out = s;
    r.exec(p, out);
    return {std::move(out), r.steps};
}

inline ExecOutcome run_impw(const Command& p, const State& s, const CostModel& cm,
                            std::uint64_t fuel) {
    if (auto why = wf_violation(p, Lang::impw)) throw Error(*why);
    detail::ImpRunner r;
    r.cm = cm;
    r.fuel = fuel;
    r.node_budget = 2 * fuel + 1024;
    State out = s;
    r.exec(p, out);
    return {std::move(out), r.steps};
}

// ------------------------------------------------------ interned bit runner ----

// Flat arena form of an IMP^- program: integer registers, POD nodes. Built
// once per program; the generator in bitblast.hpp can also emit this form
// directly without going through Command.
struct MinusProg {
    struct Node {
        enum class Op : std::uint8_t { Xbit0, Xbit1, Seq, If, While };
        Op op;
        std::int32_t reg = -1; // Xbit target / If/While condition
        std::int32_t a = -1, b = -1;
    };
    std::vector<Node> nodes;
    std::int32_t root = -1;
    std::vector<std::string> reg_names;
    std::unordered_map<std::string, std::int32_t> reg_ids;

    std::int32_t reg(const std::string& name) {
        auto it = reg_ids.find(name);
        if (it != reg_ids.end()) return it->second;
        std::int32_t id = static_cast<std::int32_t>(reg_names.size());
        reg_names.push_back(name);
        reg_ids.emplace(name, id);
        return id;
    }
    std::int32_t add(Node n) {
        nodes.push_back(n);
        return static_cast<std::int32_t>(nodes.size() - 1);
    }
    std::int32_t xbit(std::int32_t r, bool v) {
        return add({v ? Node::Op::Xbit1 : Node::Op::Xbit0, r, -1, -1});
    }
    std::int32_t seq(std::int32_t a, std::int32_t b) {
        return add({Node::Op::Seq, -1, a, b});
    }
    std::int32_t if_(std::int32_t r, std::int32_t a, std::int32_t b) {
        return add({Node::Op::If, r, a, b});
    }
    std::int32_t while_(std::int32_t r, std::int32_t a) {
        return add({Node::Op::While, r, a, -1});
    }
};

namespace detail {

inline std::int32_t intern_minus_cmd(const Command& c, MinusProg& p) {
    switch (c.kind) {
    case Command::K::AssignBit:
        return p.xbit(p.reg(c.reg), c.bit);
    case Command::K::Seq: {
        std::int32_t a = intern_minus_cmd(*c.a, p);
        std::int32_t b = intern_minus_cmd(*c.b, p);
        return p.seq(a, b);
    }
    case Command::K::If: {
        std::int32_t r = p.reg(c.reg);
        std::int32_t a = intern_minus_cmd(*c.a, p);
        std::int32_t b = intern_minus_cmd(*c.b, p);
        return p.if_(r, a, b);
    }
    case Command::K::While: {
        std::int32_t r = p.reg(c.reg);
        std::int32_t a = intern_minus_cmd(*c.a, p);
        return p.while_(r, a);
    }
    default:
        throw Error("not an IMP^- command");
    }
}

struct MinusRunner {
    const MinusProg& p;
    std::vector<std::uint8_t>& s;
    std::uint64_t fuel;
    std::uint64_t steps = 0;
    int depth = 0;
    static constexpr int kMaxDepth = 100000;

    void burn(std::uint64_t c) {
        steps += c;
        if (steps > fuel) throw FuelError("step budget exhausted");
    }

    // Fixed costs: assign 1, if n+1, seq n1+n2+1, while 1 when the guard is
    // zero and n1+n2+2 otherwise.
    void exec(std::int32_t id) {
        using Op = MinusProg::Node::Op;
        if (++depth > kMaxDepth) {
            --depth;
            throw FuelError("nesting depth exceeded");
        }
        while (true) {
            const MinusProg::Node& n = p.nodes[id];
            switch (n.op) {
            case Op::Xbit0:
                burn(1);
                s[n.reg] = 0;
                --depth;
                return;
            case Op::Xbit1:
                burn(1);
                s[n.reg] = 1;
                --depth;
                return;
            case Op::Seq:
                burn(1);
                exec(n.a);
                id = n.b;
                continue;
            case Op::If:
                burn(1);
                id = s[n.reg] ? n.a : n.b;
                continue;
            case Op::While:
                while (true) {
                    if (!s[n.reg]) {
                        burn(1);
                        --depth;
                        return;
                    }
                    burn(2);
                    exec(n.a);
                }
            }
        }
    }
};

} // namespace detail

inline MinusProg intern_minus(const Command& p) {
    if (auto why = wf_violation(p, Lang::impminus)) throw Error(*why);
    MinusProg out;
    out.root = detail::intern_minus_cmd(p, out);
    return out;
}

// Interned entry point: state indexed by MinusProg register ids.
inline std::uint64_t run_minus_interned(const MinusProg& p, std::vector<std::uint8_t>& state,
                                        std::uint64_t fuel) {
    detail::MinusRunner r{p, state, fuel};
    r.exec(p.root);
    return r.steps;
}

// Tree-walking IMP^- execution at the fixed bit costs; the slow reference
// the interned runner can be compared against.
inline ExecOutcome run_impminus_tree(const Command& p, const State& s, std::uint64_t fuel) {
    if (auto why = wf_violation(p, Lang::impminus)) throw Error(*why);
    for (const auto& [r, v] : s.m)
        if (v > 1)
            throw Error("IMP^- state must be single-bit; register '" + r + "' holds " + v.str());
    detail::ImpRunner r;
    r.cm = CostModel::imp_minus();
    r.fuel = fuel;
    r.node_budget = 2 * fuel + 1024;
    State out = s;
    r.exec(p, out);
    return {std::move(out), r.steps};
}

inline ExecOutcome run_impminus(const Command& p, const State& s, std::uint64_t fuel) {
    MinusProg mp = intern_minus(p);
    std::vector<std::uint8_t> flat(mp.reg_names.size(), 0);
    for (const auto& [r, v] : s.m) {
        if (v > 1)
            throw Error("IMP^- state must be single-bit; register '" + r + "' holds " + v.str());
        auto it = mp.reg_ids.find(r);
        if (it != mp.reg_ids.end()) flat[it->second] = v.convert_to<std::uint8_t>();
    }
    std::uint64_t steps = run_minus_interned(mp, flat, fuel);
    State out = s;
    for (size_t i = 0; i < flat.size(); ++i) out.set(mp.reg_names[i], Nat(int(flat[i])));
    return {std::move(out), steps};
}

} // namespace rcc
