// Command-line front end: censuses, generators, dominance predictions, the
// subsampling summaries, and the network builders, all seeded and emitting
// a manifest with every output.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "walkcensus/generators.hpp"
#include "walkcensus/graph.hpp"
#include "walkcensus/motif_counts.hpp"
#include "walkcensus/netbuild.hpp"
#include "walkcensus/sampling.hpp"
#include "walkcensus/shape_names.hpp"
#include "walkcensus/theory.hpp"
#include "walkcensus/walk_shapes.hpp"

using json = nlohmann::ordered_json;
using namespace walkcensus;

namespace {

constexpr const char* tool_version = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct RunContext {
    std::string command;
    std::string config; // canonical echo of the parsed options
    std::uint64_t seed = 0;
    int threads = 0;

    std::string hash() const {
        std::ostringstream os;
        os << std::hex << fnv1a(command + "|" + config + "|" + std::to_string(seed));
        return os.str();
    }
    std::string comment() const {
        return "walkcensus v" + std::string(tool_version) + " " + command + " seed=" +
               std::to_string(seed) + " config=" + hash();
    }
    json manifest() const {
        json m;
        m["tool"] = "walkcensus";
        m["version"] = tool_version;
        m["command"] = command;
        m["seed"] = seed;
        m["config"] = config;
        m["config_hash"] = hash();
        return m;
    }
};

std::string resolve_out(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("WALKCENSUS_OUT_DIR");
    if (!dir || !*dir) return path;
    std::string d(dir);
    if (d.back() != '/') d.push_back('/');
    return d + path;
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return load_edge_list(in).graph;
}

void write_text(const std::string& path, const std::string& body) {
    std::string full = resolve_out(path);
    std::ofstream out(full, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + full);
    out << body;
}

void emit(const std::string& out_path, const std::string& body) {
    if (out_path.empty())
        std::cout << body;
    else
        write_text(out_path, body);
}

std::string json_body(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

Kernel parse_kernel(const std::string& sizes, const std::string& values) {
    if (sizes.empty()) return Kernel::constant();
    std::vector<double> block_sizes = parse_double_list(sizes);
    std::vector<std::vector<double>> rows;
    std::istringstream is(values);
    std::string row;
    while (std::getline(is, row, ';')) rows.push_back(parse_double_list(row));
    return Kernel::blockmodel(block_sizes, rows);
}

json shapes_json(const std::vector<CanonicalCode>& codes, int /*k*/) {
    json arr = json::array();
    for (CanonicalCode c : codes) {
        // resolve a representative through the known families
        for (int kk = 2; kk <= max_scale; ++kk) {
            const WalkShape* s = find_shape(enumerate_walk_shapes(kk), c);
            if (s) {
                arr.push_back(shape_display_name(*s));
                goto next;
            }
        }
        arr.push_back(code_hex(c));
    next:;
    }
    return arr;
}

int cmd_census(const std::string& graph_path, int kmax, bool tables, const std::string& out,
               RunContext& ctx) {
    Graph g = load_graph_file(graph_path);
    CensusResult census = run_census(g, kmax);
    json j;
    j["manifest"] = ctx.manifest();
    j["n"] = g.node_count();
    j["edges"] = g.edge_count();
    json counts;
    for (int k = 2; k <= kmax; ++k) counts["closed_walks"][std::to_string(k)] = to_string(census.closed_walks[k]);
    for (int k = 3; k <= kmax; ++k) {
        counts["nb_closed_walks"][std::to_string(k)] = to_string(census.nb_closed_walks[k]);
        counts["cycles"][std::to_string(k)] = to_string(census.cycles.at(k));
    }
    counts["two_paths"] = to_string(census.two_paths);
    counts["two_path_norm"] = to_string(census.two_path_norm);
    j["counts"] = counts;
    if (tables) {
        json tabs = json::array();
        for (int k = 2; k <= std::min(kmax, max_scale); ++k) {
            ShapePoset poset = build_shape_poset(k);
            json tk;
            tk["k"] = k;
            json shapes = json::array();
            for (const auto& s : poset.shapes) {
                json sj;
                sj["name"] = shape_display_name(s);
                sj["code"] = code_hex(s.code);
                sj["v"] = s.v;
                sj["e"] = s.e;
                sj["degrees"] = s.degrees;
                sj["aut"] = to_string(s.aut);
                sj["ind_self"] = to_string(s.ind_self.at(k));
                shapes.push_back(sj);
            }
            tk["shapes"] = shapes;
            json covers = json::array();
            for (const auto& c : poset.covers) {
                json cj;
                cj["from"] = code_hex(c.from);
                cj["to"] = code_hex(c.to);
                cj["degree_case"] = c.degree_case;
                covers.push_back(cj);
            }
            tk["covers"] = covers;
            tabs.push_back(tk);
        }
        j["tables"] = tabs;
    }
    emit(out, json_body(j));
    return 0;
}

int cmd_generate(const std::string& model, int n, double p, double rho, double gamma, double theta,
                 int neighbors, double rewire, std::uint64_t iterations,
                 const std::string& kernel_sizes, const std::string& kernel_values,
                 const std::string& out, RunContext& ctx) {
    Graph g(0);
    if (model == "er") {
        g = sample_erdos_renyi(n, p, ctx.seed);
    } else if (model == "kernel") {
        KernelModel m(n, rho, parse_kernel(kernel_sizes, kernel_values));
        g = sample_kernel_graph(m, ctx.seed);
    } else if (model == "powerlaw") {
        PowerLawModel m(n, gamma, theta);
        g = sample_powerlaw_graph(m, ctx.seed);
    } else if (model == "ws") {
        g = sample_watts_strogatz(n, neighbors, rewire, ctx.seed);
    } else if (model == "pa") {
        g = sample_pref_attachment(n, ctx.seed);
    } else if (model == "triadic") {
        Graph base = sample_erdos_renyi(n, p, ctx.seed);
        g = triadic_closure_rewire(base, iterations, ctx.seed);
    } else {
        throw std::runtime_error("unknown model: " + model);
    }
    std::ostringstream os;
    os << "# " << ctx.comment() << "\n";
    write_edge_list(g, os);
    emit(out, os.str());
    return 0;
}

int cmd_predict(const std::string& model, int k, double n, double rho, double gamma, double beta,
                bool nb, const std::string& kernel_sizes, const std::string& kernel_values,
                const std::string& out, RunContext& ctx) {
    json j;
    j["manifest"] = ctx.manifest();
    if (model == "kernel") {
        Kernel kappa = parse_kernel(kernel_sizes, kernel_values);
        DominanceReport r = nb ? dominant_shapes_nb(k, n, rho, kappa)
                               : dominant_shapes_kernel(k, n, rho, kappa);
        j["model"] = nb ? "kernel-nb" : "kernel";
        j["k"] = r.k;
        j["k_star"] = r.k_star_value;
        j["case"] = r.case_id;
        j["dominant"] = shapes_json(r.dominant, k);
        j["subdominant"] = shapes_json(r.subdominant, k);
        j["first_order_ratio"] = r.first_order_ratio;
    } else if (model == "powerlaw") {
        PowerLawRegime r = regime_powerlaw(k, gamma, beta);
        j["model"] = "powerlaw";
        j["k"] = r.k;
        j["gamma"] = r.gamma;
        j["beta"] = r.beta;
        j["classified"] = r.classified;
        j["branch"] = r.branch;
        json doms = json::array();
        for (auto f : r.dominating) doms.push_back(family_name(f, k));
        j["dominating"] = doms;
        auto put = [&](const char* key, double v) {
            if (std::isfinite(v)) j[key] = v;
        };
        put("k_star", r.k_star_value);
        put("k_dagger", r.k_dagger);
        put("k_circ", r.k_circ);
        put("k_plus", r.k_plus);
        j["nb_cycle_dominated"] = r.nb_cycle_dominated;
    } else {
        throw std::runtime_error("unknown model: " + model);
    }
    emit(out, json_body(j));
    return 0;
}

int cmd_rates(const std::string& alphas_str, int jmin, int jmax, int reps, const std::string& out,
              RunContext& ctx) {
    auto alphas = parse_double_list(alphas_str);
    auto rows = rate_experiment(alphas, jmin, jmax, ctx.seed, reps);
    std::ostringstream os;
    os << "# " << ctx.comment() << "\n";
    os << "alpha,predicted,estimated,points,flagged\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g", r.alpha, r.predicted, r.estimated);
        os << buf << ',' << r.points_used << ',' << (r.flagged ? 1 : 0) << "\n";
    }
    emit(out, os.str());
    return 0;
}

json violin_json(const ViolinSummary& v, const RunContext& ctx) {
    json j;
    j["manifest"] = ctx.manifest();
    j["alpha"] = v.alpha;
    json scales = json::array();
    for (const auto& sc : v.scales) {
        json s;
        s["k"] = sc.k;
        s["zero_mass"] = sc.zero_mass;
        s["positive_fraction"] = sc.positive_fraction;
        s["mean_t"] = sc.mean_t;
        s["grid"] = sc.curve.grid;
        s["density"] = sc.curve.values;
        scales.push_back(s);
    }
    j["scales"] = scales;
    return j;
}

int cmd_summarize(const std::string& graph_path, int kmax, double alpha, const std::string& sizes_str,
                  int n_sizes, double delta, const std::string& out_prefix, RunContext& ctx) {
    Graph g = load_graph_file(graph_path);
    std::vector<int> sizes;
    if (sizes_str == "auto") {
        sizes = select_sizes(g, kmax, alpha, n_sizes, delta, ctx.seed, ctx.threads);
    } else {
        std::istringstream is(sizes_str);
        std::string tok;
        while (std::getline(is, tok, ',')) sizes.push_back(std::stoi(tok));
    }
    SummaryConfig cfg;
    cfg.sizes = sizes;
    cfg.k_max = kmax;
    cfg.alpha = alpha;
    cfg.seed = ctx.seed;
    cfg.threads = ctx.threads;
    ScaleSamples samples = summarize(g, cfg);
    ViolinSummary v = violin(samples, alpha);

    std::ostringstream csv;
    export_samples_csv(samples, csv, ctx.comment());
    write_text(out_prefix + ".samples.csv", csv.str());

    json vj = violin_json(v, ctx);
    vj["sizes"] = sizes;
    write_text(out_prefix + ".violin.json", json_body(vj));
    write_text(out_prefix + ".violin.svg", render_violin_svg(v, ctx.comment()));
    std::cout << "wrote " << out_prefix << ".samples.csv, .violin.json, .violin.svg\n";
    return 0;
}

int cmd_select_sizes(const std::string& graph_path, int kmax, double alpha, int n_sizes, double delta,
                     const std::string& out, RunContext& ctx) {
    Graph g = load_graph_file(graph_path);
    auto sizes = select_sizes(g, kmax, alpha, n_sizes, delta, ctx.seed, ctx.threads);
    json j;
    j["manifest"] = ctx.manifest();
    j["sizes"] = sizes;
    emit(out, json_body(j));
    return 0;
}

int cmd_build_network(const std::string& mode, const std::string& messages, std::int64_t window_start,
                      double window_days, int max_edit, const std::string& out, RunContext& ctx) {
    std::ifstream in(messages);
    if (!in) throw std::runtime_error("cannot open messages file: " + messages);
    auto records = ingest_messages(in);
    Graph g(0);
    if (mode == "url") {
        std::int64_t t = window_start + std::int64_t(window_days * 86400.0);
        g = aggregate_url_network(records, t);
    } else if (mode == "editsim") {
        WindowSpec w{window_start, window_start + std::int64_t(window_days * 86400.0)};
        g = windowed_similarity_network(records, w, max_edit, ctx.threads);
    } else {
        throw std::runtime_error("unknown mode: " + mode);
    }
    std::ostringstream os;
    os << "# " << ctx.comment() << "\n";
    write_edge_list(g, os);
    emit(out, os.str());
    return 0;
}

int cmd_render_violin(const std::string& samples_path, double alpha, const std::string& out,
                      RunContext& ctx) {
    std::ifstream in(samples_path);
    if (!in) throw std::runtime_error("cannot open samples file: " + samples_path);
    ScaleSamples s;
    std::string line;
    std::map<int, std::vector<double>> per_k;
    std::map<int, std::vector<int>> sizes_k;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("k,", 0) == 0) continue;
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        int k = std::stoi(tok);
        std::getline(ls, tok, ','); // r
        std::getline(ls, tok, ',');
        int size = std::stoi(tok);
        std::getline(ls, tok, ',');
        double t = std::stod(tok);
        per_k[k].push_back(t);
        sizes_k[k].push_back(size);
    }
    if (per_k.empty()) throw std::runtime_error("samples file holds no rows");
    s.k_max = per_k.rbegin()->first;
    s.replicates = int(per_k.begin()->second.size());
    s.alpha = alpha;
    s.t.assign(s.k_max + 1, {});
    for (auto& [k, v] : per_k) s.t[k] = v;
    s.size_used = sizes_k.begin()->second;
    ViolinSummary v = violin(s, alpha);
    emit(out, render_violin_svg(v, ctx.comment()));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scale-based network comparison via closed-walk censuses"};
    app.require_subcommand(1);
    RunContext ctx;
    app.add_option("--threads", ctx.threads, "worker thread cap (0 = hardware)");

    std::string graph_path, out, model, sizes_str = "auto", kernel_sizes, kernel_values;
    std::string messages, mode, alphas_str = "0,0.25,0.5,0.75,1";
    int kmax = 9, n = 0, neighbors = 5, max_edit = 29, n_sizes = 21, jmin = 7, jmax = 12, reps = 10;
    int k = 4;
    double p = 0, rho = 0, gamma = 0.5, theta = 1.0, rewire = 0.05, alpha = 0.01, delta = 0.05;
    double beta = 0.0, nreal = 0;
    double window_days = 4.0;
    std::int64_t window_start = 0;
    std::uint64_t iterations = 10000;
    bool tables = false, nb = false;

    auto* census = app.add_subcommand("census", "closed-walk, cycle and shape censuses");
    census->add_option("--graph", graph_path, "edge list file")->required();
    census->add_option("--kmax", kmax, "largest scale (<= 9)");
    census->add_flag("--tables", tables, "include W_k shape tables and covers");
    census->add_option("--out", out, "output file (default stdout)");
    census->add_option("--seed", ctx.seed, "seed echoed in the manifest");

    auto* gen = app.add_subcommand("generate", "sample a random graph model");
    gen->add_option("--model", model, "er|kernel|powerlaw|ws|pa|triadic")->required();
    gen->add_option("--n", n, "node count")->required();
    gen->add_option("--p", p, "edge probability (er, triadic base)");
    gen->add_option("--rho", rho, "kernel edge scale");
    gen->add_option("--gamma", gamma, "power-law exponent");
    gen->add_option("--theta", theta, "power-law scale");
    gen->add_option("--neighbors", neighbors, "lattice neighbors per side (ws)");
    gen->add_option("--rewire", rewire, "rewiring probability (ws)");
    gen->add_option("--iterations", iterations, "triadic closure iterations");
    gen->add_option("--kernel-sizes", kernel_sizes, "block sizes, comma separated");
    gen->add_option("--kernel-values", kernel_values, "block values, ';' rows");
    gen->add_option("--seed", ctx.seed, "master seed");
    gen->add_option("--out", out, "edge list output (default stdout)");

    auto* predict = app.add_subcommand("predict", "dominating-shape predictions");
    predict->add_option("--model", model, "kernel|powerlaw")->required();
    predict->add_option("--k", k, "walk scale")->required();
    predict->add_option("--n", nreal, "node count (kernel model)");
    predict->add_option("--rho", rho, "edge probability scale (kernel model)");
    predict->add_option("--gamma", gamma, "power-law exponent");
    predict->add_option("--beta", beta, "power-law theta decay exponent");
    predict->add_flag("--nb", nb, "non-backtracking walks (kernel model)");
    predict->add_option("--kernel-sizes", kernel_sizes, "block sizes");
    predict->add_option("--kernel-values", kernel_values, "block values");
    predict->add_option("--out", out, "output file (default stdout)");
    predict->add_option("--seed", ctx.seed, "seed echoed in the manifest");

    auto* rates = app.add_subcommand("rates", "convergence-rate experiment");
    rates->add_option("--alphas", alphas_str, "comma-separated alpha grid");
    rates->add_option("--jmin", jmin, "smallest size exponent (n = 2^j)");
    rates->add_option("--jmax", jmax, "largest size exponent");
    rates->add_option("--reps", reps, "replicates at the largest size");
    rates->add_option("--seed", ctx.seed, "master seed");
    rates->add_option("--out", out, "CSV output (default stdout)");

    auto* summ = app.add_subcommand("summarize", "subsampling scale summaries (violins)");
    summ->add_option("--graph", graph_path, "edge list file")->required();
    summ->add_option("--kmax", kmax, "largest scale");
    summ->add_option("--alpha", alpha, "level");
    summ->add_option("--sizes", sizes_str, "auto or comma-separated sizes");
    summ->add_option("--ns", n_sizes, "number of sizes for auto selection");
    summ->add_option("--delta", delta, "size increment for auto selection");
    summ->add_option("--seed", ctx.seed, "master seed");
    summ->add_option("--out", out, "output prefix")->required();

    auto* sel = app.add_subcommand("select-sizes", "automatic subsampling-size selection");
    sel->add_option("--graph", graph_path, "edge list file")->required();
    sel->add_option("--kmax", kmax, "largest scale");
    sel->add_option("--alpha", alpha, "level");
    sel->add_option("--ns", n_sizes, "number of sizes");
    sel->add_option("--delta", delta, "size increment");
    sel->add_option("--seed", ctx.seed, "master seed");
    sel->add_option("--out", out, "output file (default stdout)");

    auto* build = app.add_subcommand("build-network", "message-log network builders");
    build->add_option("--mode", mode, "url|editsim")->required();
    build->add_option("--messages", messages, "CSV of user,timestamp,text,urls")->required();
    build->add_option("--window-start", window_start, "window start (epoch seconds)");
    build->add_option("--window-days", window_days, "window length in days");
    build->add_option("--max-edit", max_edit, "edit distance threshold");
    build->add_option("--seed", ctx.seed, "seed echoed in the manifest");
    build->add_option("--out", out, "edge list output (default stdout)");

    auto* render = app.add_subcommand("render-violin", "re-render violins from a samples CSV");
    render->add_option("--samples", messages, "samples CSV path")->required();
    render->add_option("--alpha", alpha, "level for the zero-mass rule");
    render->add_option("--seed", ctx.seed, "seed echoed in the manifest");
    render->add_option("--out", out, "SVG output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        auto* sub = app.get_subcommands().front();
        ctx.command = sub->get_name();
        std::ostringstream cfg;
        for (const auto* opt : sub->get_options())
            if (opt->count() && opt->get_name() != "--out")
                cfg << opt->get_name() << "=" << opt->as<std::string>() << ";";
        ctx.config = cfg.str();
        if (sub == census) return cmd_census(graph_path, kmax, tables, out, ctx);
        if (sub == gen)
            return cmd_generate(model, n, p, rho, gamma, theta, neighbors, rewire, iterations,
                                kernel_sizes, kernel_values, out, ctx);
        if (sub == predict)
            return cmd_predict(model, k, nreal, rho, gamma, beta, nb, kernel_sizes, kernel_values,
                               out, ctx);
        if (sub == rates) return cmd_rates(alphas_str, jmin, jmax, reps, out, ctx);
        if (sub == summ)
            return cmd_summarize(graph_path, kmax, alpha, sizes_str, n_sizes, delta, out, ctx);
        if (sub == sel) return cmd_select_sizes(graph_path, kmax, alpha, n_sizes, delta, out, ctx);
        if (sub == build)
            return cmd_build_network(mode, messages, window_start, window_days, max_edit, out, ctx);
        if (sub == render) return cmd_render_violin(messages, alpha, out, ctx);
        throw std::runtime_error("unhandled subcommand");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
