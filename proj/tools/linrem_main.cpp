// linrem: command-line front end for the solution-removal toolkit.
//
// Subcommands: field, gen, ap, normalize, certify, count, copies, remove,
// verify. Text output by default, --json where a machine-readable document is
// useful. Exit codes: 0 success, 1 verification failure, 2 usage/parse/budget
// errors.

#include <linrem/certificate.hpp>
#include <linrem/hypergraph.hpp>
#include <linrem/instances.hpp>
#include <linrem/normalize.hpp>
#include <linrem/removal.hpp>
#include <linrem/system.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace linrem;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

struct FieldArgs {
    std::uint32_t p = 0;
    std::uint32_t n = 1;
    std::string modulus;

    FieldPtr make() const {
        std::vector<Elt> coeffs;
        std::istringstream is(modulus);
        std::uint64_t v;
        while (is >> v) coeffs.push_back(static_cast<Elt>(v));
        return make_field(p, n, std::move(coeffs));
    }
};

void add_field_flags(CLI::App* cmd, FieldArgs& args) {
    cmd->add_option("--p", args.p, "field characteristic (prime)")->required();
    cmd->add_option("--n", args.n, "extension degree");
    cmd->add_option("--modulus", args.modulus,
                    "monic irreducible, ascending coefficients \"c0 c1 ... cn\"");
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    out << text;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Shared by certify/copies/remove-verify: normalize, drop unconstrained
// variables, return the certified-form system plus the full transcript.
struct CertifiedForm {
    LinSystem sys;        // (I_k|B), no zero columns, colperm applied
    Transcript transcript;
    KernelCertificate cert;
};

std::optional<std::string> degenerate_name(const NormalizeOutcome& out) {
    if (auto* deg = std::get_if<Degenerate>(&out)) {
        switch (deg->kind) {
            case DegenerateKind::Inconsistent: return "inconsistent";
            case DegenerateKind::SolutionFree: return "solution-free";
            case DegenerateKind::AllFree: return "all-free";
        }
    }
    return std::nullopt;
}

CertifiedForm certified_form(const LinSystem& s) {
    NormalizeOutcome out = normalize(s);
    if (auto name = degenerate_name(out))
        throw std::invalid_argument("instance is not certifiable (normalize outcome: " + *name +
                                    ")");
    auto& ns = std::get<NormalizedSystem>(out);
    CertifiedForm cf{std::move(ns.sys), std::move(ns.transcript), {}};
    for (;;) {
        int zero_col = -1;
        for (int j = cf.sys.k(); j < cf.sys.m() && zero_col < 0; ++j)
            if (cf.sys.a.col_is_zero(j)) zero_col = j;
        if (zero_col < 0) break;
        if (cf.sys.sets[zero_col].empty())
            throw std::invalid_argument(
                "instance is not certifiable (an unconstrained variable has an empty set)");
        DropVariableRec rec{zero_col, cf.sys.sets[zero_col].front()};
        cf.sys = apply_record(cf.sys, rec);
        cf.transcript.push_back(rec);
    }
    cf.cert = build_certificate(cf.sys.a);
    bool is_id = true;
    for (std::size_t j = 0; j < cf.cert.trace.colperm.size(); ++j)
        if (cf.cert.trace.colperm[j] != static_cast<int>(j)) is_id = false;
    if (!is_id) {
        ColPermuteRec rec{cf.cert.trace.colperm};
        cf.sys = apply_record(cf.sys, rec);
        cf.transcript.push_back(std::move(rec));
    }
    return cf;
}

std::string report_checks_text(const CertReport& rep) {
    std::ostringstream os;
    for (const auto& c : rep.checks) {
        os << "check " << c.name << ' ' << (c.pass ? "pass" : "fail");
        if (!c.pass && !c.detail.empty()) os << " (" << c.detail << ')';
        os << '\n';
    }
    for (const auto& n : rep.notes) os << "note " << n << '\n';
    return os.str();
}

json removals_json(const std::vector<Removal>& removals) {
    json arr = json::array();
    for (const auto& [idx, v] : removals) arr.push_back({idx + 1, v});
    return arr;
}

json report_json(const RemovalReport& r) {
    json j;
    j["status"] = r.status;
    j["strategy"] = r.strategy;
    j["p"] = r.p;
    j["n"] = r.n;
    j["q"] = r.q;
    j["certified_k"] = r.cert_k;
    j["certified_m"] = r.cert_m;
    j["threshold_num"] = r.threshold_num;
    j["threshold_den"] = r.threshold_den;
    j["solutions_before"] = r.solutions_before;
    j["copies_before"] = r.copies_before;
    j["edge_set_size"] = r.edge_set_size;
    j["removed_pairs"] = r.removed_pairs;
    j["removed_normalized"] = removals_json(r.removed_normalized);
    j["removed_original"] = removals_json(r.removed_original);
    j["h_free"] = r.h_free;
    j["normalized_solution_free"] = r.normalized_solution_free;
    j["original_solution_free"] = r.original_solution_free;
    j["pigeonhole_bound_ok"] = r.pigeonhole_bound_ok;
    j["counting_identity_ok"] = r.counting_identity_ok;
    j["final_solutions"] = r.final_solutions;
    j["certificate_digest"] = hex64(r.certificate_digest);
    return j;
}

int cmd_field(const FieldArgs& fa) {
    FieldPtr f = fa.make();
    std::ostringstream os;
    os << "p: " << f->p() << '\n';
    os << "n: " << f->n() << '\n';
    os << "q: " << f->q() << '\n';
    os << "modulus:";
    for (Elt c : f->modulus()) os << ' ' << c;
    os << '\n';
    std::cout << os.str();
    return kExitOk;
}

int cmd_gen(const FieldArgs& fa, int k, int m, std::uint64_t seed, double density, int plant,
            bool normalized, const std::string& out) {
    FieldPtr f = fa.make();
    LinSystem s = normalized ? random_normalized_system(f, k, m, seed, density, plant)
                             : random_system(f, k, m, seed, density, plant);
    write_output(out, emit_instance(s));
    return kExitOk;
}

int cmd_ap(const FieldArgs& fa, int len, const std::string& set_str, double density,
           std::uint64_t seed, const std::string& out) {
    FieldPtr f = fa.make();
    EltSet xs;
    if (!set_str.empty()) {
        std::istringstream is(set_str);
        std::uint64_t v;
        while (is >> v) xs.push_back(f->element(v));
    } else {
        std::mt19937_64 rng(seed);
        for (std::uint64_t v = 0; v < f->q(); ++v) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (u < density) xs.push_back(static_cast<Elt>(v));
        }
    }
    write_output(out, emit_instance(ap_system(f, len, std::move(xs))));
    return kExitOk;
}

int cmd_normalize(const std::string& path, bool as_json) {
    LinSystem s = parse_instance(read_input(path));
    NormalizeOutcome out = normalize(s);
    if (as_json) {
        json j;
        if (auto name = degenerate_name(out)) {
            j["outcome"] = *name;
            const auto& deg = std::get<Degenerate>(out);
            j["records"] = deg.transcript.size();
            j["residual"] = emit_instance(deg.residual);
        } else {
            const auto& ns = std::get<NormalizedSystem>(out);
            j["outcome"] = "normalized";
            j["k"] = ns.sys.k();
            j["m"] = ns.sys.m();
            j["records"] = ns.transcript.size();
            j["system"] = emit_instance(ns.sys);
        }
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    }
    std::ostringstream os;
    if (auto name = degenerate_name(out)) {
        const auto& deg = std::get<Degenerate>(out);
        os << "outcome: " << *name << '\n';
        os << "records: " << deg.transcript.size() << '\n';
        os << emit_instance(deg.residual);
    } else {
        const auto& ns = std::get<NormalizedSystem>(out);
        os << "outcome: normalized\n";
        os << "records: " << ns.transcript.size() << '\n';
        os << emit_instance(ns.sys);
    }
    std::cout << os.str();
    return kExitOk;
}

int cmd_certify(const std::string& path, const std::string& out) {
    LinSystem s = parse_instance(read_input(path));
    CertifiedForm cf = certified_form(s);
    CertReport rep = verify_certificate(cf.sys.a, cf.cert);
    std::string text = emit_certificate(cf.cert) + report_checks_text(rep);
    write_output(out, text);
    return rep.all_pass() ? kExitOk : kExitVerifyFailure;
}

int cmd_count(const std::string& path, std::uint64_t budget) {
    LinSystem s = parse_instance(read_input(path));
    SolutionCount sc = count_solutions(s, budget);
    std::cout << "solutions: " << sc.count << '\n';
    return kExitOk;
}

int cmd_copies(const std::string& path, std::uint64_t budget, int threads,
               std::uint64_t list_limit) {
    LinSystem s = parse_instance(read_input(path));
    CertifiedForm cf = certified_form(s);
    BigHypergraph kk(cf.sys.field, cf.cert.c, cf.cert.s, cf.sys.sets, cf.sys.k());
    SolutionCount sc = count_solutions(cf.sys, budget);
    const std::uint64_t copies = kk.count_copies(budget, threads);
    const std::uint64_t per = kk.copies_per_solution();
    std::ostringstream os;
    os << "q: " << kk.q() << '\n';
    os << "k: " << kk.k() << '\n';
    os << "m: " << kk.m() << '\n';
    os << "solutions: " << sc.count << '\n';
    os << "copies: " << copies << '\n';
    const bool identity = copies == per * sc.count;
    os << "identity: " << (identity ? "pass" : "fail") << " (q^k * solutions = " << per << " * "
       << sc.count << ")\n";
    if (sc.collected && copies <= list_limit) {
        for (const auto& x : sc.solutions) {
            os << "solution";
            for (Elt v : x) os << ' ' << v;
            os << '\n';
            for (const auto& copy : kk.copies_for_solution(x)) {
                os << "  copy";
                for (Elt v : copy.assignment) os << ' ' << v;
                os << '\n';
            }
        }
    }
    std::cout << os.str();
    return identity ? kExitOk : kExitVerifyFailure;
}

int cmd_remove(const std::string& path, const std::string& strategy, std::uint64_t budget,
               int threads, bool as_json, const std::string& out) {
    LinSystem s = parse_instance(read_input(path));
    RemovalOptions opts;
    auto strat = parse_strategy(strategy);
    if (!strat) throw std::invalid_argument("--strategy must be greedy, all, or exact");
    opts.strategy = *strat;
    opts.budget = budget;
    opts.threads = threads;
    RemovalReport rep = removal_pipeline(s, opts);
    if (as_json) {
        json j = report_json(rep);
        j["instance"] = emit_instance(s);
        write_output(out, j.dump(2) + "\n");
    } else {
        write_output(out, emit_report_text(rep));
    }
    return kExitOk;
}

int cmd_verify_certificate(const LinSystem& s, const std::string& cert_path) {
    KernelCertificate cert = parse_certificate(read_input(cert_path));
    CertReport rep = verify_certificate(cert.a, cert);
    bool matches = true;
    std::string why;
    try {
        CertifiedForm cf = certified_form(s);
        if (!(cf.sys.a == cert.a)) {
            matches = false;
            why = "certified matrix differs from the instance's certified form";
        }
    } catch (const std::exception& e) {
        matches = false;
        why = e.what();
    }
    std::ostringstream os;
    os << report_checks_text(rep);
    os << "check instance " << (matches ? "pass" : "fail");
    if (!matches) os << " (" << why << ')';
    os << '\n';
    std::cout << os.str();
    return (rep.all_pass() && matches) ? kExitOk : kExitVerifyFailure;
}

int cmd_verify_report(const LinSystem& s, const std::string& report_path,
                      std::uint64_t budget) {
    json j = json::parse(read_input(report_path));
    std::vector<Removal> removed_original;
    for (const auto& pair : j.at("removed_original"))
        removed_original.push_back(
            {pair.at(0).get<int>() - 1, static_cast<Elt>(pair.at(1).get<std::uint64_t>())});
    std::vector<std::pair<std::string, bool>> checks;
    LinSystem pruned = s;
    pruned.sets = apply_removals(std::move(pruned.sets), removed_original);
    const std::uint64_t final_count = count_solutions(pruned, budget).count;
    checks.push_back({"final_solutions", final_count == j.at("final_solutions").get<std::uint64_t>()});
    const std::string status = j.at("status").get<std::string>();
    if (status != "unremovable-empty")
        checks.push_back({"original_solution_free", final_count == 0});
    const unsigned __int128 qk = j.at("threshold_num").get<std::uint64_t>();
    const unsigned __int128 den = j.at("threshold_den").get<int>();
    const unsigned __int128 pairs = j.at("removed_pairs").get<std::uint64_t>();
    const unsigned __int128 esize = j.at("edge_set_size").get<std::uint64_t>();
    if (status == "ok")
        checks.push_back({"pigeonhole_bound", pairs * qk <= den * esize});
    for (const char* flag : {"h_free", "normalized_solution_free", "original_solution_free",
                             "pigeonhole_bound_ok", "counting_identity_ok"})
        if (status == "ok") checks.push_back({flag, j.at(flag).get<bool>()});
    bool all = true;
    std::ostringstream os;
    for (const auto& [name, pass] : checks) {
        os << "check " << name << ' ' << (pass ? "pass" : "fail") << '\n';
        all = all && pass;
    }
    std::cout << os.str();
    return all ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solution removal for linear systems over finite fields"};
    app.require_subcommand(1);

    FieldArgs field_args;
    auto* field_cmd = app.add_subcommand("field", "describe a finite field");
    add_field_flags(field_cmd, field_args);

    FieldArgs gen_field;
    int gen_k = 1, gen_m = 3, gen_plant = 0;
    std::uint64_t gen_seed = 1;
    double gen_density = 0.5;
    bool gen_normalized = false;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
    add_field_flags(gen_cmd, gen_field);
    gen_cmd->add_option("--k", gen_k, "equations")->required();
    gen_cmd->add_option("--m", gen_m, "variables")->required();
    gen_cmd->add_option("--seed", gen_seed, "random seed");
    gen_cmd->add_option("--density", gen_density, "set density in [0,1]");
    gen_cmd->add_option("--plant", gen_plant, "planted solutions");
    gen_cmd->add_flag("--normalized", gen_normalized, "emit an already-normalized system");
    gen_cmd->add_option("-o,--output", gen_out, "output file (default stdout)");

    FieldArgs ap_field;
    int ap_len = 3;
    std::string ap_set, ap_out;
    double ap_density = 0.5;
    std::uint64_t ap_seed = 1;
    auto* ap_cmd = app.add_subcommand("ap", "arithmetic-progression instance");
    add_field_flags(ap_cmd, ap_field);
    ap_cmd->add_option("--len", ap_len, "progression length (>= 3)")->required();
    ap_cmd->add_option("--set", ap_set, "explicit common set \"e1 e2 ...\"");
    ap_cmd->add_option("--density", ap_density, "random set density (with --seed)");
    ap_cmd->add_option("--seed", ap_seed, "random seed for --density");
    ap_cmd->add_option("-o,--output", ap_out, "output file (default stdout)");

    std::string norm_path;
    bool norm_json = false;
    auto* norm_cmd = app.add_subcommand("normalize", "reduce an instance to normal form");
    norm_cmd->add_option("instance", norm_path, "instance file or -")->required();
    norm_cmd->add_flag("--json", norm_json, "machine-readable output");

    std::string cert_path, cert_out;
    auto* cert_cmd = app.add_subcommand("certify", "build and audit a kernel certificate");
    cert_cmd->add_option("instance", cert_path, "instance file or -")->required();
    cert_cmd->add_option("-o,--output", cert_out, "output file (default stdout)");

    std::string count_path;
    std::uint64_t count_budget = 100'000'000;
    auto* count_cmd = app.add_subcommand("count", "count solutions with set membership");
    count_cmd->add_option("instance", count_path, "instance file or -")->required();
    count_cmd->add_option("--budget", count_budget, "enumeration budget");

    std::string copies_path;
    std::uint64_t copies_budget = 100'000'000, copies_list = 64;
    int copies_threads = 1;
    auto* copies_cmd = app.add_subcommand("copies", "count template copies in K");
    copies_cmd->add_option("instance", copies_path, "instance file or -")->required();
    copies_cmd->add_option("--budget", copies_budget, "enumeration budget");
    copies_cmd->add_option("--threads", copies_threads, "worker threads");
    copies_cmd->add_option("--list-limit", copies_list, "print copies when at most this many");

    std::string remove_path, remove_strategy = "greedy", remove_out;
    std::uint64_t remove_budget = 100'000'000;
    int remove_threads = 1;
    bool remove_json = false;
    auto* remove_cmd = app.add_subcommand("remove", "run the removal pipeline");
    remove_cmd->add_option("instance", remove_path, "instance file or -")->required();
    remove_cmd->add_option("--strategy", remove_strategy, "greedy | all | exact");
    remove_cmd->add_option("--budget", remove_budget, "enumeration budget");
    remove_cmd->add_option("--threads", remove_threads, "worker threads");
    remove_cmd->add_flag("--json", remove_json, "machine-readable report");
    remove_cmd->add_option("-o,--output", remove_out, "output file (default stdout)");

    std::string verify_path, verify_cert, verify_report;
    std::uint64_t verify_budget = 100'000'000;
    auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate or removal report");
    verify_cmd->add_option("instance", verify_path, "instance file or -")->required();
    verify_cmd->add_option("--certificate", verify_cert, "certificate file");
    verify_cmd->add_option("--report", verify_report, "removal report (JSON)");
    verify_cmd->add_option("--budget", verify_budget, "enumeration budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;  // help/version exit 0, misuse 2
    }

    try {
        if (field_cmd->parsed()) return cmd_field(field_args);
        if (gen_cmd->parsed())
            return cmd_gen(gen_field, gen_k, gen_m, gen_seed, gen_density, gen_plant,
                           gen_normalized, gen_out);
        if (ap_cmd->parsed())
            return cmd_ap(ap_field, ap_len, ap_set, ap_density, ap_seed, ap_out);
        if (norm_cmd->parsed()) return cmd_normalize(norm_path, norm_json);
        if (cert_cmd->parsed()) return cmd_certify(cert_path, cert_out);
        if (count_cmd->parsed()) return cmd_count(count_path, count_budget);
        if (copies_cmd->parsed())
            return cmd_copies(copies_path, copies_budget, copies_threads, copies_list);
        if (remove_cmd->parsed())
            return cmd_remove(remove_path, remove_strategy, remove_budget, remove_threads,
                              remove_json, remove_out);
        if (verify_cmd->parsed()) {
            if (verify_cert.empty() == verify_report.empty())
                throw std::invalid_argument("verify needs exactly one of --certificate/--report");
            LinSystem s = parse_instance(read_input(verify_path));
            if (!verify_cert.empty()) return cmd_verify_certificate(s, verify_cert);
            return cmd_verify_report(s, verify_report, verify_budget);
        }
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const BudgetError& e) {
        std::cerr << "budget: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        // malformed inputs (field parameters, instance/certificate files, flags)
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "internal check failed: " << e.what() << '\n';
        return kExitVerifyFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
