#pragma once

// Encoding of ADT values as naturals via the Cantor pairing function.
//
// A constructor C_i (1-based tag i, arity a) applied to already-encoded
// arguments x1..xa becomes
//
//     pair(i, x1 <> (x2 <> (... <> xa)))        where <> is pair and the
//                                               empty nest (a = 0) is 0.
//
// Arguments are read back with selectors: select_{a,j} applies snd j times and
// then fst unless j = a. A case over an n-constructor type becomes a cascade
// of n-1 tag tests on fst; the last arm rides in the final else untested.

#include "rcc/ast.hpp"
#include "rcc/check.hpp"
#include "rcc/error.hpp"
#include "rcc/nat.hpp"
#include "rcc/nat_ir.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rcc {

// ------------------------------------------------------------ Cantor pair ----

inline Nat cantor_pair(const Nat& a, const Nat& b) {
    Nat s = a + b;
    return s * (s + 1) / 2 + b;
}

inline std::pair<Nat, Nat> cantor_unpair(const Nat& n) {
    Nat t = triangle_root(n);
    Nat b = n - t * (t + 1) / 2;
    Nat a = t - b;
    return {a, b};
}

inline Nat cantor_fst(const Nat& n) { return cantor_unpair(n).first; }
inline Nat cantor_snd(const Nat& n) { return cantor_unpair(n).second; }

// --------------------------------------------------------------- encoding ----

// Per-declaration encoding facts: tags are 1-based declaration positions.
struct EncodedAdt {
    std::string name;
    std::vector<std::string> ctor_names;
    std::vector<size_t> arities;

    size_t n_ctors() const { return arities.size(); }
    Nat tag(size_t ctor_index) const { return Nat(ctor_index + 1); }

    static EncodedAdt of(const AdtDecl& d) {
        EncodedAdt e;
        e.name = d.name;
        for (const auto& c : d.ctors) {
            e.ctor_names.push_back(c.name);
            e.arities.push_back(c.arg_types.size());
        }
        return e;
    }
};

// pair(tag, right-nested argument tuple); no-argument constructors pair the
// tag with 0, so e.g. a two-constructor type's first nullary constructor
// encodes as pair(1,0) = 1.
inline Nat encode_ctor(const EncodedAdt& e, size_t ctor_index, const std::vector<Nat>& args) {
    if (ctor_index >= e.n_ctors())
        throw EncodingError("constructor index " + std::to_string(ctor_index) +
                            " out of range for " + e.name);
    if (args.size() != e.arities[ctor_index])
        throw EncodingError("constructor " + e.ctor_names[ctor_index] + " wants " +
                            std::to_string(e.arities[ctor_index]) + " argument(s)");
    Nat nest = 0;
    if (!args.empty()) {
        nest = args.back();
        for (size_t i = args.size() - 1; i-- > 0;) nest = cantor_pair(args[i], nest);
    }
    return cantor_pair(e.tag(ctor_index), nest);
}

// j-th component (1-based) of an arity-`arity` constructor's ENCODING x
// (x includes the tag): snd^j, then fst unless j = arity.
inline Nat selector(size_t arity, size_t j, Nat x) {
    if (j < 1 || j > arity)
        throw EncodingError("selector position " + std::to_string(j) + " out of 1.." +
                            std::to_string(arity));
    for (size_t k = 0; k < j; ++k) x = cantor_snd(x);
    return j < arity ? cantor_fst(x) : x;
}

// ------------------------------------------------- value <-> Nat transport ----

inline Nat natify(const Program& p, const TypeRef& t, const Value& v) {
    if (t.is_nat()) {
        if (!v.is_nat)
            throw EncodingError("value " + show_value(v) + " is not a Nat");
        return v.n;
    }
    const AdtDecl* d = p.find_adt(t.head);
    if (!d) throw EncodingError("unknown type " + show_type(t));
    if (v.is_nat || v.adt != d->name)
        throw EncodingError("value " + show_value(v) + " is not of type " + show_type(t));
    std::map<std::string, TypeRef> subst;
    for (size_t i = 0; i < d->type_params.size(); ++i)
        subst.emplace(d->type_params[i], t.args[i]);
    const CtorDecl& c = d->ctors[v.ctor_index];
    std::vector<Nat> enc_args;
    enc_args.reserve(v.args.size());
    for (size_t j = 0; j < v.args.size(); ++j)
        enc_args.push_back(natify(p, subst_type(c.arg_types[j], subst), *v.args[j]));
    return encode_ctor(EncodedAdt::of(*d), v.ctor_index, enc_args);
}

// Inverse of natify on well-encoded numbers. Strict mode rejects out-of-range
// tags; lenient mode sends them to the last constructor, exactly where the
// lowered case cascade would send them (its final else is untested). Payloads
// of nullary constructors are never inspected, matching the cascade again.
//
// The depth guard exists for lenient mode: a nonsense number can decode to a
// constructor whose recursive component is the same number again (0 as a list
// is the classic case), which is the Nat-level image of a diverging cascade.
inline ValuePtr denatify(const Program& p, const TypeRef& t, const Nat& n,
                         bool lenient = false, int depth = 0) {
    if (depth > 4000) throw EncodingError("decoding depth exceeded (cyclic lenient decode?)");
    if (t.is_nat()) return natv(n);
    const AdtDecl* d = p.find_adt(t.head);
    if (!d) throw EncodingError("unknown type " + show_type(t));
    auto [tag, nest] = cantor_unpair(n);
    size_t nc = d->ctors.size();
    size_t idx;
    if (tag >= 1 && tag <= Nat(nc)) {
        idx = tag.convert_to<size_t>() - 1;
    } else if (lenient) {
        idx = nc - 1;
    } else {
        throw EncodingError("tag " + tag.str() + " out of range 1.." + std::to_string(nc) +
                            " for " + d->name + " (decoding " + n.str() + ")");
    }
    std::map<std::string, TypeRef> subst;
    for (size_t i = 0; i < d->type_params.size(); ++i)
        subst.emplace(d->type_params[i], t.args[i]);
    const CtorDecl& c = d->ctors[idx];
    std::vector<ValuePtr> args;
    Nat cur = nest;
    for (size_t j = 0; j < c.arg_types.size(); ++j) {
        bool last = j + 1 == c.arg_types.size();
        Nat comp = last ? cur : cantor_fst(cur);
        args.push_back(denatify(p, subst_type(c.arg_types[j], subst), comp, lenient, depth + 1));
        if (!last) cur = cantor_snd(cur);
    }
    return conv(d->name, c.name, idx, std::move(args));
}

// --------------------------------------------------------- case lowering ----

// The lowered dispatch for one ADT, as a NatTerm template with two
// conventions: the scrutinee is (arg 0) and arm i is a call to "arm<i>"
// (1-based) applied to that arm's selector chain. natify_fun instantiates the
// template by substituting a real scrutinee and splicing arm bodies in place
// of the arm<i> calls; tests can also evaluate it directly by defining the
// arm<i> names.
inline NatTermPtr lower_case_shape(const EncodedAdt& e) {
    auto arm = [&](size_t i) { // i is 0-based here
        std::vector<NatTermPtr> sels;
        size_t a = e.arities[i];
        for (size_t j = 1; j <= a; ++j) {
            NatTermPtr x = nt_arg(0);
            for (size_t k = 0; k < j; ++k) x = nt_call("snd", {std::move(x)});
            if (j < a) x = nt_call("fst", {std::move(x)});
            sels.push_back(std::move(x));
        }
        return nt_call("arm" + std::to_string(i + 1), std::move(sels));
    };
    size_t n = e.n_ctors();
    NatTermPtr out = arm(n - 1);
    for (size_t i = n - 1; i-- > 0;) {
        NatTermPtr test =
            nt_call("eq", {nt_call("fst", {nt_arg(0)}), nt_num(e.tag(i))});
        out = nt_if(std::move(test), arm(i), std::move(out));
    }
    return out;
}

} // namespace rcc
