// Command-line front door: parse/check source files, translate and lower
// them stage by stage, run programs of any stage, and drive the differential
// tester. Reports are JSON (one object per line where a command can emit
// several).

#include "rcc/rcc.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rcc::Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

rcc::Program load_program(const std::string& path) {
    rcc::Program p = rcc::parse_program(slurp(path));
    rcc::validate(p);
    return p;
}

json nat_to_json(const rcc::Nat& v) {
    // Numbers above 2^53 - 1 don't survive a double round-trip; use strings.
    static const rcc::Nat cutoff = (rcc::Nat(1) << 53) - 1;
    if (v <= cutoff) return json(v.convert_to<std::uint64_t>());
    return json(v.str());
}

rcc::Nat nat_from_json(const json& v) {
    if (v.is_number_unsigned()) return rcc::Nat(v.get<std::uint64_t>());
    if (v.is_string()) return rcc::parse_nat(v.get<std::string>());
    throw rcc::Error("expected a natural number (number or decimal string)");
}

rcc::State state_from_file(const std::string& path) {
    json j = json::parse(slurp(path));
    if (!j.is_object()) throw rcc::Error("state file must hold a JSON object");
    rcc::State s;
    for (const auto& [k, v] : j.items()) s.set(k, nat_from_json(v));
    return s;
}

json state_to_json(const rcc::State& s) {
    json j = json::object();
    for (const auto& [k, v] : s.m) j[k] = nat_to_json(v);
    return j;
}

rcc::CostModel cost_model_from_file(const std::string& path) {
    json j = json::parse(slurp(path));
    rcc::CostModel cm;
    auto get = [&](const char* k, std::uint64_t& slot) {
        if (j.contains(k)) slot = j.at(k).get<std::uint64_t>();
    };
    get("assign", cm.assign);
    get("seq", cm.seq);
    get("if", cm.if_);
    get("while_false", cm.while_false);
    get("while_true", cm.while_true);
    get("recurse", cm.recurse);
    get("call", cm.call);
    return cm;
}

// Constructor-literal terms (plus parenthesized applications) as values.
rcc::ValuePtr value_from_term(const rcc::Program& p, const rcc::TypeRef& t,
                              const rcc::Term& tm) {
    using K = rcc::Term::K;
    if (t.is_nat()) {
        if (tm.kind != K::NatLit) throw rcc::Error("expected a numeral for a Nat");
        return rcc::natv(tm.lit);
    }
    std::string head;
    const std::vector<rcc::TermPtr>* args = nullptr;
    static const std::vector<rcc::TermPtr> none;
    if (tm.kind == K::Var) {
        head = tm.name;
        args = &none;
    } else if (tm.kind == K::App) {
        head = tm.name;
        args = &tm.args;
    } else {
        throw rcc::Error("expected a constructor application");
    }
    auto [adt, idx] = p.find_ctor(head);
    if (!adt || adt->name != t.head)
        throw rcc::Error("'" + head + "' is not a constructor of " + rcc::show_type(t));
    if (t.args.size() != adt->type_params.size())
        throw rcc::Error(rcc::show_type(t) + ": wrong number of type arguments");
    std::map<std::string, rcc::TypeRef> inst;
    for (size_t i = 0; i < adt->type_params.size(); ++i)
        inst[adt->type_params[i]] = t.args[i];
    const rcc::CtorDecl& c = adt->ctors[idx];
    if (args->size() != c.arg_types.size())
        throw rcc::Error("'" + head + "' wants " + std::to_string(c.arg_types.size()) +
                         " argument(s)");
    std::vector<rcc::ValuePtr> vs;
    for (size_t i = 0; i < args->size(); ++i)
        vs.push_back(value_from_term(p, rcc::subst_type(c.arg_types[i], inst), *(*args)[i]));
    return rcc::conv(adt->name, c.name, idx, std::move(vs));
}

rcc::TypeRef type_from_string(const std::string& text) {
    // Reuse the program parser on a dummy parameter.
    rcc::Program p = rcc::parse_program("fun probe__ (x : " + text + ") : Nat = 0");
    return p.funs.at(0).params.at(0).type;
}

int fail(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tail-recursive functional programs, lowered to single-bit registers"};
    app.require_subcommand(1);

    // ---- parse ----
    std::string parse_file;
    auto* cmd_parse = app.add_subcommand("parse", "parse and check a source file");
    cmd_parse->add_option("file", parse_file)->required();

    // ---- natify ----
    std::string nat_file, nat_fun;
    auto* cmd_natify = app.add_subcommand("natify", "translate a function to the Nat IR");
    cmd_natify->add_option("file", nat_file)->required();
    cmd_natify->add_option("-f,--function", nat_fun, "function (default: all)");

    // ---- compile ----
    std::string co_file, co_fun, co_to = "impw", co_width = "auto", co_state_file;
    auto* cmd_compile = app.add_subcommand("compile", "lower a function to an IMP language");
    cmd_compile->add_option("file", co_file)->required();
    cmd_compile->add_option("-f,--function", co_fun)->required();
    cmd_compile->add_option("--to", co_to, "imptc|impwc|impw|impminus (default impw)");
    cmd_compile->add_option("--width", co_width, "bit width for impminus, or 'auto'");
    cmd_compile->add_option("--state", co_state_file,
                            "entry state used to derive the auto width");

    // ---- run ----
    std::string run_lang = "impw", run_prog, run_state_file, run_cost_file;
    std::uint64_t run_fuel = 50'000'000;
    auto* cmd_run = app.add_subcommand("run", "run a serialized IMP program on a state");
    cmd_run->add_option("program", run_prog, "program file (s-expression)")->required();
    cmd_run->add_option("--lang", run_lang, "imptc|impwc|impw|impminus");
    cmd_run->add_option("--state", run_state_file, "JSON state file")->required();
    cmd_run->add_option("--cost-model", run_cost_file, "JSON cost model");
    cmd_run->add_option("--fuel", run_fuel);

    // ---- encode / decode ----
    std::string enc_file, enc_type, enc_value;
    auto* cmd_encode = app.add_subcommand("encode", "encode a constructor value as a natural");
    cmd_encode->add_option("file", enc_file)->required();
    cmd_encode->add_option("--type", enc_type)->required();
    cmd_encode->add_option("--value", enc_value)->required();

    std::string dec_file, dec_type, dec_nat;
    bool dec_lenient = false;
    auto* cmd_decode = app.add_subcommand("decode", "decode a natural back into a value");
    cmd_decode->add_option("file", dec_file)->required();
    cmd_decode->add_option("--type", dec_type)->required();
    cmd_decode->add_option("--nat", dec_nat)->required();
    cmd_decode->add_flag("--lenient", dec_lenient, "clamp out-of-range tags");

    // ---- difftest ----
    std::string dt_file, dt_cost_file, dt_mutation = "none";
    std::vector<std::string> dt_funs;
    std::uint64_t dt_cases = 100, dt_seed = 1;
    bool dt_bits = false;
    auto* cmd_diff = app.add_subcommand("difftest", "compare all stages on random inputs");
    cmd_diff->add_option("file", dt_file)->required();
    cmd_diff->add_option("--cases", dt_cases);
    cmd_diff->add_option("--seed", dt_seed);
    cmd_diff->add_option("--cost-model", dt_cost_file);
    cmd_diff->add_option("--function", dt_funs, "restrict to these functions");
    cmd_diff->add_option("--mutation", dt_mutation, "seed a known fault");
    cmd_diff->add_flag("--bits", dt_bits, "descend to the single-bit machine too");

    // ---- bench ----
    std::string be_file;
    std::vector<std::string> be_funs;
    auto* cmd_bench = app.add_subcommand("bench", "stage sizes and bit-level blow-up");
    cmd_bench->add_option("file", be_file)->required();
    cmd_bench->add_option("--function", be_funs, "restrict to these functions");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_parse) {
            rcc::Program p = load_program(parse_file);
            std::cout << rcc::show_program(p);
            return 0;
        }

        if (*cmd_natify) {
            rcc::Program p = load_program(nat_file);
            rcc::NatProgram np = rcc::natify_program(p);
            for (const auto& d : np.defs) {
                if (!nat_fun.empty() && d.name != nat_fun) continue;
                std::cout << rcc::show_nat_def(d) << "\n";
            }
            return 0;
        }

        if (*cmd_compile) {
            rcc::Program p = load_program(co_file);
            rcc::Pipeline pl = rcc::build_pipeline(p);
            const rcc::FunStages& st = pl.at(co_fun);
            if (co_to == "imptc") {
                std::cout << rcc::show_command(*st.imptc_norm) << "\n";
            } else if (co_to == "impwc") {
                std::cout << rcc::show_command(*st.impwc) << "\n";
            } else if (co_to == "impw") {
                std::cout << rcc::show_command(*st.impw) << "\n";
            } else if (co_to == "impminus") {
                unsigned w = 0;
                if (co_width == "auto") {
                    if (co_state_file.empty())
                        throw rcc::Error("--width auto needs --state to bound the run");
                    rcc::State s0 = state_from_file(co_state_file);
                    rcc::ExecOutcome out =
                        rcc::run_impw(*st.impw, s0, rcc::CostModel::unit(), 50'000'000);
                    w = rcc::required_width(*st.impw, s0, out.steps);
                } else {
                    w = static_cast<unsigned>(std::stoul(co_width));
                }
                std::cout << rcc::show_command(*rcc::blast_program(*st.impw, w)) << "\n";
            } else {
                throw rcc::Error("unknown target '" + co_to + "'");
            }
            return 0;
        }

        if (*cmd_run) {
            rcc::Cmd prog = rcc::parse_command(slurp(run_prog));
            rcc::State s0 = run_state_file.empty() ? rcc::State{}
                                                   : state_from_file(run_state_file);
            rcc::CostModel cm = run_cost_file.empty() ? rcc::CostModel::unit()
                                                      : cost_model_from_file(run_cost_file);
            auto lang = rcc::lang_from_name(run_lang);
            if (!lang) throw rcc::Error("unknown language '" + run_lang + "'");
            rcc::ExecOutcome out;
            switch (*lang) {
            case rcc::Lang::imptc: out = rcc::run_imptc(*prog, s0, cm, run_fuel); break;
            case rcc::Lang::impwc: out = rcc::run_impwc(*prog, s0, cm, run_fuel); break;
            case rcc::Lang::impw: out = rcc::run_impw(*prog, s0, cm, run_fuel); break;
            case rcc::Lang::impminus: out = rcc::run_impminus(*prog, s0, run_fuel); break;
            }
            json j{{"steps", out.steps}, {"state", state_to_json(out.state)}};
            std::cout << j.dump() << "\n";
            return 0;
        }

        if (*cmd_encode) {
            rcc::Program p = load_program(enc_file);
            rcc::TypeRef t = type_from_string(enc_type);
            rcc::TermPtr tm = rcc::parse_term_string(enc_value);
            rcc::ValuePtr v = value_from_term(p, t, *tm);
            std::cout << rcc::natify(p, t, *v).str() << "\n";
            return 0;
        }

        if (*cmd_decode) {
            rcc::Program p = load_program(dec_file);
            rcc::TypeRef t = type_from_string(dec_type);
            rcc::ValuePtr v = rcc::denatify(p, t, rcc::parse_nat(dec_nat), dec_lenient);
            std::cout << rcc::show_value(*v) << "\n";
            return 0;
        }

        if (*cmd_diff) {
            rcc::Program p = load_program(dt_file);
            rcc::DiffConfig cfg;
            cfg.cases = dt_cases;
            cfg.seed = dt_seed;
            cfg.bits = dt_bits;
            if (!dt_cost_file.empty()) cfg.cost = cost_model_from_file(dt_cost_file);
            auto mut = rcc::mutation_from_name(dt_mutation);
            if (!mut) throw rcc::Error("unknown mutation '" + dt_mutation + "'");
            cfg.mutation = *mut;
            size_t mismatches = 0;
            for (const auto& rep : rcc::difftest_program(p, cfg, dt_funs)) {
                std::cout << rep.to_json().dump() << "\n";
                mismatches += rep.total_mismatches();
            }
            return mismatches == 0 ? 0 : 1;
        }

        if (*cmd_bench) {
            rcc::Program p = load_program(be_file);
            rcc::Pipeline pl = rcc::build_pipeline(p);
            for (const rcc::FunDef& f : p.funs) {
                if (f.is_template()) continue;
                if (!be_funs.empty() &&
                    std::find(be_funs.begin(), be_funs.end(), f.name) == be_funs.end())
                    continue;
                std::cout << rcc::stage_sizes(pl, f.name).to_json().dump() << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        return fail(e);
    }
    return 0;
}
