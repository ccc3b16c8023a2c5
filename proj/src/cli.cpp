#include "kwm/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "kwm/io.hpp"
#include "kwm/kw.hpp"

namespace kwm {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
    std::uint64_t seed = 0;
    int trials = 50;
    std::optional<int> degree_bound;
    std::optional<int> latent_bound;
    int n = 2;
    std::string format = "text";
    std::string output;
    std::vector<std::string> files;

    SimilarityOptions similarity() const { return {trials, seed}; }
};

struct Outcome {
    int code = kExitOk;
    Json report;
    /// Model or matrix file text produced by the command.
    std::string payload;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void need_files(const Options& o, std::size_t min, std::size_t max, const std::string& usage) {
    if (o.files.size() < min || o.files.size() > max) throw InputError("usage: kwm " + usage);
}

std::vector<int> sorted_desc(std::vector<int> v) {
    std::sort(v.rbegin(), v.rend());
    return v;
}

Json witness_json(const SimilarityWitness& w) { return {{"U", print_qmatrix(w.u)}, {"V", print_qmatrix(w.v)}}; }

Outcome cmd_build(const Options& o) {
    need_files(o, 1, 1, "build <matrix-file>");
    const ARModel r = parse_matrix(read_file(o.files[0]));
    const KWModel m = kw_of_ar(r);
    const ProperReport pr = properness_routes(m, o.similarity());
    Outcome out;
    out.report = {{"command", "build"},
                  {"indices", KroneckerIndices(m.blocks()).to_string()},
                  {"dimX", m.dim_x()},
                  {"dimY", m.dim_y()},
                  {"proper", pr.proper},
                  {"proper_direct", pr.direct},
                  {"proper_reduced", pr.reduced}};
    out.payload = print_model(m);
    return out;
}

Outcome cmd_indices(const Options& o) {
    need_files(o, 1, 1, "indices <model-file>");
    const ModelText t = parse_model_text(read_file(o.files[0]));
    const int dmax = o.degree_bound.value_or(index_bound(t.pencil));
    const IndexExtraction ext = extract_indices(t.pencil, dmax, o.similarity());
    Outcome out;
    out.code = ext.is_kw ? kExitOk : (ext.inconclusive ? kExitInconclusive : kExitNegative);
    out.report = {{"command", "indices"},
                  {"verdict", ext.is_kw ? "KW" : (ext.inconclusive ? "INCONCLUSIVE" : "NOT_KW")},
                  {"indices", ext.indices.to_string()},
                  {"hilbert_kernel", ext.hilbert_kernel},
                  {"multiplicities", ext.multiplicities},
                  {"reason", ext.reason},
                  {"seed", o.seed},
                  {"trials", o.trials}};
    if (ext.witness) out.report["witness"] = witness_json(*ext.witness);
    return out;
}

Outcome cmd_proper(const Options& o) {
    need_files(o, 1, 1, "proper <model-file>");
    const KWModel m = parse_model(read_file(o.files[0]), o.similarity());
    const ProperReport pr = properness_routes(m, o.similarity());
    const bool agree = pr.direct == pr.reduced;
    Outcome out;
    out.code = !agree ? kExitInconclusive : pr.proper ? kExitOk : kExitNegative;
    out.report = {{"command", "proper"},
                  {"verdict", !agree ? "ROUTES_DISAGREE" : pr.proper ? "PROPER" : "NOT_PROPER"},
                  {"direct", pr.direct ? "PROPER" : "NOT_PROPER"},
                  {"reduced", pr.reduced ? "PROPER" : "NOT_PROPER"},
                  {"indices", m.indices().to_string()}};
    return out;
}

Outcome cmd_eliminate(const Options& o) {
    need_files(o, 1, 1, "eliminate <model-file>");
    const KWModel m = parse_model(read_file(o.files[0]), o.similarity());
    const ARModel r = eliminate(m, o.similarity());
    Outcome out;
    out.report = {{"command", "eliminate"}, {"free_behavior", r.is_free()}, {"rows", r.p()}, {"row_degrees", r.row_degrees()}};
    out.payload = print_matrix(r);
    return out;
}

Outcome cmd_equiv(const Options& o) {
    need_files(o, 2, 2, "equiv <matrix-file> <matrix-file>");
    const ARModel a = parse_matrix(read_file(o.files[0]));
    const ARModel b = parse_matrix(read_file(o.files[1]));
    if (a.n() != b.n() || a.q() != b.q()) throw InputError("equiv: the models must share n and q");
    const bool equal = behavior_handle(a) == behavior_handle(b);
    Outcome out;
    out.code = equal ? kExitOk : kExitNegative;
    out.report = {{"command", "equiv"}, {"verdict", equal ? "EQUAL" : "DIFFERENT"}};
    return out;
}

Outcome cmd_similar(const Options& o) {
    need_files(o, 2, 2, "similar <model-file> <model-file>");
    const KWModel a = parse_model(read_file(o.files[0]), o.similarity());
    const KWModel b = parse_model(read_file(o.files[1]), o.similarity());
    if (a.n() != b.n() || a.q() != b.q()) throw InputError("similar: the models must share n and q");
    const SimilarityResult s = models_similar(a, b, o.similarity());
    Outcome out;
    out.code = s.verdict == Verdict::Similar ? kExitOk
               : s.verdict == Verdict::NotSimilar ? kExitNegative
                                                  : kExitInconclusive;
    out.report = {{"command", "similar"},
                  {"verdict", to_string(s.verdict)},
                  {"reason", s.reason},
                  {"solution_dim", s.solution_dim},
                  {"seed", o.seed},
                  {"trials", o.trials}};
    if (s.witness) {
        out.report["witness"] = witness_json(*s.witness);
        out.report["witness_verified"] = verify_witness(a.pencil(), b.pencil(), *s.witness) &&
                                         s.witness->u * a.m() == b.m();
    }
    return out;
}

Outcome cmd_dims(const Options& o) {
    need_files(o, 0, 1, "dims [matrix-file]");
    Outcome out;
    if (o.files.empty()) {
        if (o.n < 1 || o.n > kMaxVars) throw InputError("dims: --n must be between 1 and 9");
        const int dmax = o.degree_bound.value_or(4);
        Json rows = Json::array();
        for (int d = 0; d <= dmax; ++d) {
            auto [x, y] = jordan_dims(o.n, d);
            rows.push_back({{"d", d}, {"dimX", x}, {"dimY", y}});
        }
        out.report = {{"command", "dims"}, {"n", o.n}, {"jordan", rows}};
        return out;
    }
    const ARModel r = parse_matrix(read_file(o.files[0]));
    const GammaFunction g = gamma_of_ar(r);
    const auto [mu, nu] = mu_nu(g, r.n());
    const KWModel m = kw_of_ar(r);
    Json gamma = Json::object();
    for (const auto& [d, c] : g.counts) gamma[std::to_string(d)] = c;
    out.report = {{"command", "dims"}, {"n", r.n()},       {"gamma", gamma},          {"mu", mu},
                  {"nu", nu},          {"dimX", m.dim_x()}, {"dimY", m.dim_y()}};
    return out;
}

Outcome cmd_minimize(const Options& o) {
    need_files(o, 1, 1, "minimize <matrix-file>");
    const ARModel r = parse_matrix(read_file(o.files[0]));
    Outcome out;
    if (!is_proper_ar(r)) {
        out.code = kExitNegative;
        out.report = {{"command", "minimize"}, {"verdict", "NOT_PROPER"}};
        return out;
    }
    const MinimizeResult res = minimize_ar(r, o.degree_bound);
    out.report = {{"command", "minimize"},
                  {"status", res.status},
                  {"replacements", res.replacements},
                  {"removals", res.removals},
                  {"degrees_before", sorted_desc(r.row_degrees())},
                  {"degrees_after", sorted_desc(res.model.row_degrees())}};
    out.payload = print_matrix(res.model);
    return out;
}

Outcome cmd_check(const Options& o) {
    need_files(o, 1, 2, "check <matrix-file> [model-file]");
    const ARModel r = parse_matrix(read_file(o.files[0]));
    const KWModel m = o.files.size() == 2 ? parse_model(read_file(o.files[1]), o.similarity()) : kw_of_ar(r);
    if (m.n() != r.n() || m.q() != r.q()) throw InputError("check: model and matrix must share n and q");
    const int D = o.degree_bound.value_or(3);
    const Theorem1Report t1 = theorem1_check(r, D, o.latent_bound);

    Outcome out;
    bool ok = t1.passed;
    Json j1 = {{"passed", t1.passed},
               {"degree_bound", t1.degree_bound},
               {"latent_bound", t1.latent_bound},
               {"solutions", t1.solutions},
               {"witnesses_verified", t1.witnesses_verified},
               {"manifest_checked", t1.manifest_checked}};
    if (!t1.failure.empty()) j1["failure"] = t1.failure;

    Json j2;
    try {
        const Theorem2Report t2 = theorem2_check(r, m, false, o.similarity());
        const bool passed = !t2.proper || (t2.mu_bound && t2.nu_bound && t2.equivalence);
        ok = ok && passed;
        j2 = {{"passed", passed},
              {"proper", t2.proper},
              {"routes_agree", t2.routes_agree},
              {"mu_hat", t2.mu_hat},
              {"nu_hat", t2.nu_hat},
              {"dimX", t2.dim_x},
              {"dimY", t2.dim_y},
              {"mu_bound", t2.mu_bound},
              {"nu_bound", t2.nu_bound},
              {"equivalence", t2.equivalence},
              {"minimal", t2.minimal},
              {"reference", t2.reference},
              {"bounds", "heuristic upper bounds"}};
    } catch (const BehaviorMismatchError& e) {
        ok = false;
        j2 = {{"passed", false}, {"failure", e.what()}};
    } catch (const ImproperError& e) {
        j2 = {{"passed", true}, {"skipped", e.what()}};
    }
    out.code = ok ? kExitOk : kExitNegative;
    out.report = {{"command", "check"}, {"verdict", ok ? "PASS" : "FAIL"}, {"theorem1", j1}, {"theorem2", j2}};
    return out;
}

void render_text(const Json& j, const std::string& prefix, std::ostream& out) {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            render_text(value, name, out);
        } else if (value.is_array() && !value.empty() && value.front().is_object()) {
            for (std::size_t i = 0; i < value.size(); ++i) render_text(value[i], name + "[" + std::to_string(i) + "]", out);
        } else if (value.is_string()) {
            out << name << ": " << value.get<std::string>() << "\n";
        } else {
            out << name << ": " << value.dump() << "\n";
        }
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact analysis of KW-models and AR representations", "kwm"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--seed", o.seed, "seed for randomized similarity searches")->capture_default_str();
    app.add_option("--trials", o.trials, "random trials per similarity search")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--degree-bound", o.degree_bound, "polynomial degree bound");
    app.add_option("--latent-bound", o.latent_bound, "latent trajectory degree bound");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("-o,--output", o.output, "also write the produced model or matrix file here");
    app.add_option("--n", o.n, "number of variables for the dims table")->capture_default_str();

    using Handler = Outcome (*)(const Options&);
    const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
        {"build", "AR matrix -> KW model", cmd_build},
        {"indices", "Kronecker indices of a pencil", cmd_indices},
        {"proper", "properness by both routes", cmd_proper},
        {"eliminate", "KW model -> AR matrix", cmd_eliminate},
        {"equiv", "behavior equality of two AR matrices", cmd_equiv},
        {"similar", "similarity of two KW models", cmd_similar},
        {"dims", "Jordan pencil dimensions, or mu/nu of an AR matrix", cmd_dims},
        {"minimize", "heuristic row-degree minimization", cmd_minimize},
        {"check", "kernel/manifest agreement and dimension bounds", cmd_check},
    };
    std::map<const CLI::App*, Handler> handlers;
    for (const auto& [name, help, handler] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("files", o.files, "input files");
        handlers[sub] = handler;
    }

    std::vector<const char*> argv{"kwm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    Outcome result;
    try {
        result = handlers.at(app.get_subcommands().front())(o);
    } catch (const NotKwError& e) {
        result.code = kExitNegative;
        result.report = {{"command", app.get_subcommands().front()->get_name()}, {"verdict", "NOT_KW"}, {"reason", e.what()}};
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const InputError& e) {
        err << e.what() << "\n";
        return kExitInputError;
    } catch (const ImproperError& e) {
        err << e.what() << "\n";
        return kExitNegative;
    } catch (const std::runtime_error& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    if (!o.output.empty() && !result.payload.empty()) {
        std::ofstream file(o.output, std::ios::binary);
        if (!file || !(file << result.payload)) {
            err << "cannot write " << o.output << "\n";
            return kExitInputError;
        }
    }
    if (o.format == "json") {
        Json j = result.report;
        if (!result.payload.empty()) j["output"] = result.payload;
        out << j.dump(2) << "\n";
    } else {
        out << result.payload;
        render_text(result.report, "", out);
    }
    return result.code;
}

}  // namespace kwm
