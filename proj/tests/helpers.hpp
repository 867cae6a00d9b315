#pragma once

#include "rcc/rcc.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rcc::Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline rcc::Program load_sample(const std::string& name) {
    rcc::Program p = rcc::parse_program(read_file(std::string(RCC_SAMPLES_DIR) + "/" + name));
    rcc::validate(p);
    return p;
}

// Cons x1 (Cons x2 (... Nil))
inline rcc::ValuePtr nat_list(const std::vector<std::uint64_t>& xs) {
    rcc::ValuePtr v = rcc::conv("List", "Nil", 0, {});
    for (size_t i = xs.size(); i-- > 0;)
        v = rcc::conv("List", "Cons", 1, {rcc::natv(rcc::Nat(xs[i])), v});
    return v;
}

inline rcc::ValuePtr leaf() { return rcc::conv("Tree", "Leaf", 0, {}); }
inline rcc::ValuePtr node(rcc::ValuePtr l, std::uint64_t x, rcc::ValuePtr r) {
    return rcc::conv("Tree", "Node", 1, {std::move(l), rcc::natv(rcc::Nat(x)), std::move(r)});
}

inline rcc::TypeRef list_nat() { return {"List", {rcc::TypeRef{"Nat", {}}}}; }

} // namespace testutil
