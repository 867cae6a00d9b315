#pragma once

// Lowering IMP^W to the single-bit language IMP^-.
//
// A register r of width w becomes w+1 bit registers: r#0 is the nonzero flag
// (1 iff the value is nonzero) and r#i holds value bit i-1 for 1 <= i <= w.
// If/While conditions then just test r#0. An addition first copies its two
// operands into the scratch bit vectors %bb::a / %bb::b, then runs a ripple-
// carry chain of full adders into the target, tracking "any result bit set"
// in %bb::zero, writing the flag from it, and resetting carry and zero to 0
// so the scratch is clean for the next expression. Subtraction (monus)
// ripples a borrow instead and clears the whole target when the final borrow
// fires. Every else-branch that has nothing to do writes %bb::nop, since the
// language has no skip.
//
// The generator is parameterized over a small builder so the same circuits
// can materialize either as Command trees or directly as the flat interned
// form the fast runner consumes.
//
// Width choice: with n the step count of the IMP^W run and M the largest
// constant in program or initial state, every value stays below M * 2^n, so
// the least safe width is w = max(n+1, n + bitlen(M)).

#include "rcc/error.hpp"
#include "rcc/imp.hpp"
#include "rcc/imp_run.hpp"
#include "rcc/nat.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rcc {

struct BlastOptions {
    // Mutation hook for the harness: wire the full adders' sum/carry outputs
    // crosswise.
    bool swap_carry_wiring = false;
};

inline std::string bit_reg(const std::string& base, unsigned i) {
    return base + "#" + std::to_string(i);
}

namespace detail {

const char* const kScratchA = "%bb::a";
const char* const kScratchB = "%bb::b";
const char* const kCarry = "%bb::carry";
const char* const kZero = "%bb::zero";
const char* const kBorrow = "%bb::borrow";
const char* const kNop = "%bb::nop";

template <class B>
struct Blaster {
    B& b;
    unsigned w;
    BlastOptions opts;

    using reg_t = typename B::reg_t;
    using node_t = typename B::node_t;

    reg_t bit(const std::string& base, unsigned i) { return b.reg(bit_reg(base, i)); }

    node_t chain(std::vector<node_t> v) {
        if (v.empty()) throw Error("empty circuit chain");
        node_t out = v.back();
        for (size_t i = v.size() - 1; i-- > 0;) out = b.seq(v[i], out);
        return out;
    }

    node_t copy_bit(reg_t dst, reg_t src) {
        return b.if_(src, b.xbit(dst, true), b.xbit(dst, false));
    }

    node_t nop() { return b.xbit(b.reg(kNop), false); }

    // Value bits of an operand into a scratch vector (no flag needed there).
    node_t load_operand(const Atom& at, const char* scratch) {
        std::vector<node_t> parts;
        if (at.is_const) {
            if (bit_length(at.n) > w)
                throw Error("constant " + at.n.str() + " does not fit in width " +
                            std::to_string(w));
            for (unsigned i = 1; i <= w; ++i)
                parts.push_back(b.xbit(bit(scratch, i), nat_bit(at.n, i - 1)));
        } else {
            for (unsigned i = 1; i <= w; ++i)
                parts.push_back(copy_bit(bit(scratch, i), bit(at.reg, i)));
        }
        return chain(std::move(parts));
    }

    // One result bit: write it, track nonzero, write carry/borrow.
    node_t leaf(const std::string& target, unsigned i, reg_t cr, bool sum, bool out) {
        if (opts.swap_carry_wiring) std::swap(sum, out);
        return chain({
            b.xbit(bit(target, i), sum),
            sum ? b.xbit(b.reg(kZero), true) : nop(),
            b.xbit(cr, out),
        });
    }

    // Full adder / subtractor for bit i, dispatching on (a, b, carry-in).
    node_t full_add(const std::string& target, unsigned i, bool subtract) {
        reg_t cr = b.reg(subtract ? kBorrow : kCarry);
        auto mk = [&](bool av, bool bv, bool cv) {
            bool sum = av ^ bv ^ cv;
            bool out = subtract ? (!av && (bv || cv)) || (av && bv && cv)
                                : (av && bv) || (av && cv) || (bv && cv);
            return leaf(target, i, cr, sum, out);
        };
        auto on_ab = [&](bool av, bool bv) {
            return b.if_(cr, mk(av, bv, true), mk(av, bv, false));
        };
        return b.if_(bit(kScratchA, i),
                     b.if_(bit(kScratchB, i), on_ab(true, true), on_ab(true, false)),
                     b.if_(bit(kScratchB, i), on_ab(false, true), on_ab(false, false)));
    }

    node_t adder(const std::string& target) {
        std::vector<node_t> parts;
        for (unsigned i = 1; i <= w; ++i) parts.push_back(full_add(target, i, false));
        parts.push_back(copy_bit(bit(target, 0), b.reg(kZero)));
        parts.push_back(b.xbit(b.reg(kCarry), false));
        parts.push_back(b.xbit(b.reg(kZero), false));
        return chain(std::move(parts));
    }

    node_t subtractor(const std::string& target) {
        std::vector<node_t> parts;
        for (unsigned i = 1; i <= w; ++i) parts.push_back(full_add(target, i, true));
        // Monus: a final borrow means b > a; the result clamps to zero.
        std::vector<node_t> clamp;
        for (unsigned i = 1; i <= w; ++i) clamp.push_back(b.xbit(bit(target, i), false));
        clamp.push_back(b.xbit(bit(target, 0), false));
        parts.push_back(b.if_(b.reg(kBorrow), chain(std::move(clamp)),
                              copy_bit(bit(target, 0), b.reg(kZero))));
        parts.push_back(b.xbit(b.reg(kBorrow), false));
        parts.push_back(b.xbit(b.reg(kZero), false));
        return chain(std::move(parts));
    }

    node_t emit_assign(const std::string& r, const AExp& e) {
        switch (e.kind) {
        case AExp::K::Atom: {
            std::vector<node_t> parts;
            if (e.a.is_const) {
                const Nat& c = e.a.n;
                if (bit_length(c) > w)
                    throw Error("constant " + c.str() + " does not fit in width " +
                                std::to_string(w));
                parts.push_back(b.xbit(bit(r, 0), c != 0));
                for (unsigned i = 1; i <= w; ++i)
                    parts.push_back(b.xbit(bit(r, i), nat_bit(c, i - 1)));
            } else {
                for (unsigned i = 0; i <= w; ++i)
                    parts.push_back(copy_bit(bit(r, i), bit(e.a.reg, i)));
            }
            return chain(std::move(parts));
        }
        case AExp::K::Add:
            return chain({load_operand(e.a, kScratchA), load_operand(e.b, kScratchB),
                          adder(r)});
        case AExp::K::Sub:
            return chain({load_operand(e.a, kScratchA), load_operand(e.b, kScratchB),
                          subtractor(r)});
        }
        throw Error("unreachable AExp kind");
    }

    node_t emit_cmd(const Command& c) {
        switch (c.kind) {
        case Command::K::Assign:
            return emit_assign(c.reg, c.e);
        case Command::K::Seq:
            return b.seq(emit_cmd(*c.a), emit_cmd(*c.b));
        case Command::K::If:
            return b.if_(bit(c.reg, 0), emit_cmd(*c.a), emit_cmd(*c.b));
        case Command::K::While:
            return b.while_(bit(c.reg, 0), emit_cmd(*c.a));
        default:
            throw Error("bit-blasting expects an IMP^W program");
        }
    }
};

struct TreeBuilder {
    using reg_t = std::string;
    using node_t = Cmd;

    reg_t reg(const std::string& n) { return n; }
    node_t xbit(const reg_t& r, bool v) { return c_xbit(r, v); }
    node_t seq(node_t a, node_t b) { return c_seq(std::move(a), std::move(b)); }
    node_t if_(const reg_t& r, node_t a, node_t b) {
        return c_if(r, std::move(a), std::move(b));
    }
    node_t while_(const reg_t& r, node_t a) { return c_while(r, std::move(a)); }
};

struct FlatBuilder {
    MinusProg& p;
    using reg_t = std::int32_t;
    using node_t = std::int32_t;

    reg_t reg(const std::string& n) { return p.reg(n); }
    node_t xbit(reg_t r, bool v) { return p.xbit(r, v); }
    node_t seq(node_t a, node_t b) { return p.seq(a, b); }
    node_t if_(reg_t r, node_t a, node_t b) { return p.if_(r, a, b); }
    node_t while_(reg_t r, node_t a) { return p.while_(r, a); }
};

} // namespace detail

// ------------------------------------------------------------- public API ----

inline Cmd blast_program(const Command& p, unsigned w, BlastOptions opts = {}) {
    if (w == 0) throw Error("width must be positive");
    if (auto why = wf_violation(p, Lang::impw)) throw Error(*why);
    detail::TreeBuilder tb;
    detail::Blaster<detail::TreeBuilder> bl{tb, w, opts};
    return bl.emit_cmd(p);
}

inline MinusProg blast_program_flat(const Command& p, unsigned w, BlastOptions opts = {}) {
    if (w == 0) throw Error("width must be positive");
    if (auto why = wf_violation(p, Lang::impw)) throw Error(*why);
    MinusProg mp;
    detail::FlatBuilder fb{mp};
    detail::Blaster<detail::FlatBuilder> bl{fb, w, opts};
    mp.root = bl.emit_cmd(p);
    return mp;
}

// The circuit for a single widened assignment (handy for exhaustive tests).
inline Cmd blast_assign(const std::string& r, const AExp& e, unsigned w,
                        BlastOptions opts = {}) {
    if (w == 0) throw Error("width must be positive");
    detail::TreeBuilder tb;
    detail::Blaster<detail::TreeBuilder> bl{tb, w, opts};
    return bl.emit_assign(r, e);
}

inline State encode_state(const State& s, unsigned w) {
    State out;
    for (const auto& [r, v] : s.m) {
        if (bit_length(v) > w)
            throw Error("value of '" + r + "' (" + v.str() + ") does not fit in width " +
                        std::to_string(w));
        out.set(bit_reg(r, 0), Nat(v != 0 ? 1 : 0));
        for (unsigned i = 1; i <= w; ++i)
            out.set(bit_reg(r, i), Nat(nat_bit(v, i - 1) ? 1 : 0));
    }
    return out;
}

namespace detail {

// "r#i" -> (r, i); nullopt for names that are not bit registers.
inline std::optional<std::pair<std::string, unsigned>> split_bit_reg(const std::string& name) {
    size_t pos = name.rfind('#');
    if (pos == std::string::npos || pos + 1 == name.size()) return std::nullopt;
    for (size_t i = pos + 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    return std::make_pair(name.substr(0, pos), unsigned(std::stoul(name.substr(pos + 1))));
}

inline bool is_scratch(const std::string& base) { return base.rfind("%bb::", 0) == 0; }

} // namespace detail

// Reassemble values from bit registers. Scratch (%bb::*) and non-bit names
// are dropped; the flag bit does not contribute to the value.
inline State decode_state(const State& bits) {
    State out;
    for (const auto& [name, v] : bits.m) {
        auto br = detail::split_bit_reg(name);
        if (!br || detail::is_scratch(br->first)) continue;
        if (v > 1)
            throw Error("bit register '" + name + "' holds " + v.str());
        auto [base, i] = *br;
        if (!out.m.count(base)) out.set(base, 0);
        if (i >= 1 && v == 1) {
            Nat cur = out.get(base);
            boost::multiprecision::bit_set(cur, i - 1);
            out.set(base, cur);
        }
    }
    return out;
}

// Check r#0 = [value of r is nonzero] for every decoded register; returns the
// first offender.
inline std::optional<std::string> flag_violation(const State& bits) {
    State vals = decode_state(bits);
    for (const auto& [base, v] : vals.m) {
        Nat flag = bits.get(bit_reg(base, 0));
        if ((v != 0) != (flag == 1)) return base;
    }
    return std::nullopt;
}

// Least width safe for running p from s for n steps: all intermediate values
// stay below max(maxconst p, maxconst s) * 2^n.
inline unsigned required_width(const Command& p, const State& s, std::uint64_t n) {
    Nat m = maxconst(p);
    Nat ms = maxconst(s);
    if (ms > m) m = ms;
    std::uint64_t lw = n + bit_length(m);
    std::uint64_t hi = std::max<std::uint64_t>(n + 1, lw);
    if (hi > 1u << 24)
        throw Error("required width " + std::to_string(hi) + " is unreasonably large");
    return static_cast<unsigned>(hi);
}

} // namespace rcc
