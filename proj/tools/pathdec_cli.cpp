#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pathdec/testbed.hpp"

namespace fs = std::filesystem;
using namespace pathdec;

namespace {

enum Exit { Ok = 0, Rejected = 1, Budget = 2, Divisibility = 3, BadInput = 4, Failure = 5 };

int exit_for(const Error& e) {
    switch (e.code()) {
    case Errc::BudgetExhausted: return Budget;
    case Errc::DivisibilityError: return Divisibility;
    case Errc::ParseError:
    case Errc::UnknownFixture:
    case Errc::BadOffset: return BadInput;
    default: return Failure;
    }
}

fs::path resolve(const std::string& name) {
    fs::path p(name);
    if (fs::exists(p)) return p;
    if (const char* dir = std::getenv("PATHDEC_DATA_DIR")) {
        fs::path q = fs::path(dir) / name;
        if (fs::exists(q)) return q;
    }
    fail(Errc::ParseError, "cannot open " + name);
}

nlohmann::json read_json(const std::string& name) {
    std::ifstream in(resolve(name));
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, name + ": " + e.what());
    }
}

// a graph document, or a fixture document carrying one
struct Input {
    MultiGraph graph;
    std::optional<Bifactorization> bif;
};

Input load_input(const std::string& name) {
    auto doc = read_json(name);
    if (doc.contains("graph")) {
        auto f = fixture_from_json(doc);
        return {std::move(f.graph), std::move(f.bif)};
    }
    return {graph_from_json(doc), std::nullopt};
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    out << text << "\n";
    if (!out) fail(Errc::ParseError, "cannot write " + path);
}

std::vector<std::size_t> parse_offsets(const std::string& spec) {
    std::vector<std::size_t> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto dash = item.find('-');
        try {
            if (dash == std::string::npos) out.push_back(std::stoul(item));
            else
                for (auto s = std::stoul(item.substr(0, dash)); s <= std::stoul(item.substr(dash + 1)); ++s) out.push_back(s);
        } catch (const std::exception&) {
            fail(Errc::BadOffset, "bad offset list " + spec);
        }
    }
    return out;
}

struct Config {
    std::size_t ell = 0;
    std::vector<std::string> inputs;
    std::string output;
    std::uint64_t seed = 0;
    std::size_t budget = 64;
    std::size_t jobs = 1;
    std::string audit_log;
    std::string format = "json";
    bool quiet = false;
    // verify
    std::string graph, decomposition;
    // generate
    std::size_t n = 0;
    std::string offsets;
    // fixture
    std::string name;
    bool all = false;
};

int run_decompose_one(const Config& c, const std::string& input, const std::string& output) {
    auto in = load_input(input);
    std::vector<SwapRecord> swaps;
    DecomposeOptions opt;
    opt.seed = c.seed;
    opt.budget = c.budget;
    opt.hint = in.bif;
    if (!c.audit_log.empty()) opt.swaps = &swaps;
    if (!c.quiet) opt.warn = [&](const std::string& m) { std::cerr << input << ": warning: " << m << "\n"; };
    auto d = decompose(in.graph, c.ell, opt);
    write_text(output, to_json(d).dump());
    if (!c.audit_log.empty()) {
        std::ofstream log(c.audit_log, std::ios::app);
        for (const auto& s : swaps)
            log << input << " step " << s.step << ": tracking " << s.first_tracking << " gives edge "
                << s.moved_to_second.value << " to tracking " << s.second_tracking << " and takes edge "
                << s.moved_to_first.value << "\n";
    }
    if (!c.quiet) std::cerr << input << ": " << d.size() << " paths of length " << c.ell << "\n";
    return Ok;
}

int cmd_decompose(const Config& c) {
    if (c.inputs.size() == 1) return run_decompose_one(c, c.inputs[0], c.output);
    // several inputs: one document per input inside the output directory
    if (c.output.empty()) fail(Errc::ParseError, "several inputs need --output naming a directory");
    fs::create_directories(c.output);
    std::vector<int> codes(c.inputs.size(), Ok);
    std::mutex err;
    std::size_t next = 0;
    auto worker = [&] {
        while (true) {
            std::size_t i;
            {
                std::lock_guard lk(err);
                if (next == c.inputs.size()) return;
                i = next++;
            }
            auto out = (fs::path(c.output) / (fs::path(c.inputs[i]).stem().string() + ".paths.json")).string();
            try {
                codes[i] = run_decompose_one(c, c.inputs[i], out);
            } catch (const Error& e) {
                std::lock_guard lk(err);
                std::cerr << c.inputs[i] << ": " << e.what() << "\n";
                codes[i] = exit_for(e);
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::max<std::size_t>(1, c.jobs); ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return *std::max_element(codes.begin(), codes.end());
}

int cmd_verify(const Config& c) {
    auto g = load_input(c.graph).graph;
    auto d = path_decomposition_from_json(read_json(c.decomposition));
    auto rep = verify_decomposition(g, c.ell, d);
    std::cout << rep.text();
    return rep.ok ? Ok : Rejected;
}

int cmd_generate(const Config& c) {
    write_text(c.output, to_json(gen_circulant(c.n, parse_offsets(c.offsets))).dump());
    return Ok;
}

int cmd_oracle(const Config& c) {
    auto g = load_input(c.inputs.at(0)).graph;
    auto d = brute_force_decompose(g, c.ell);
    if (!d) {
        std::cout << "none\n";
        return Rejected;
    }
    write_text(c.output, to_json(*d).dump());
    return Ok;
}

std::string file_name(const std::string& fixture) {
    std::string s;
    for (char ch : fixture) s += char(std::tolower(static_cast<unsigned char>(ch)));
    return s + ".json";
}

int cmd_fixture(const Config& c) {
    if (c.all) {
        fs::path dir = c.output.empty() ? fs::path(".") : fs::path(c.output);
        fs::create_directories(dir);
        for (const auto& n : fixture_names()) write_text((dir / file_name(n)).string(), to_json(fixture(n, c.seed)).dump());
        return Ok;
    }
    write_text(c.output, to_json(fixture(c.name, c.seed)).dump());
    return Ok;
}

int cmd_stats(const Config& c) {
    auto g = load_input(c.inputs.at(0)).graph;
    std::size_t lo = g.vertex_count() ? SIZE_MAX : 0, hi = 0;
    for (const auto& v : g.vertices()) {
        lo = std::min(lo, g.degree(v.id));
        hi = std::max(hi, g.degree(v.id));
    }
    auto lambda = edge_connectivity(g);
    nlohmann::json o{{"vertices", g.vertex_count()}, {"edges", g.edge_count()}, {"min_degree", lo},
                     {"max_degree", hi}, {"edge_connectivity", lambda}};
    if (c.ell) {
        auto need = required_connectivity(c.ell);
        o["ell"] = c.ell;
        o["divisible"] = g.edge_count() % c.ell == 0;
        o["threshold"] = need.threshold;
        o["threshold_divisor"] = need.divisor;
        o["meets_threshold"] = lambda >= need.threshold;
        if (c.ell % 2 == 0) o["threshold_single_divisor"] = required_connectivity(c.ell, EvenVariant::SingleDivisor).threshold;
    }
    write_text(c.output, o.dump(2));
    return Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Path decompositions of highly edge-connected bipartite graphs"};
    app.require_subcommand(1);
    Config c;
    auto common = [&](CLI::App* s) {
        s->add_option("--output,-o", c.output, "output file (stdout when omitted)");
        s->add_option("--seed", c.seed, "random seed")->capture_default_str();
        s->add_option("--budget", c.budget, "connected-split attempts")->capture_default_str();
        s->add_option("--format", c.format, "document format")->check(CLI::IsMember({"json"}));
        s->add_flag("--quiet,-q", c.quiet, "no progress on stderr");
    };
    auto* dec = app.add_subcommand("decompose", "decompose a graph into paths");
    dec->add_option("--ell,-l", c.ell, "path length")->required();
    dec->add_option("--input,-i", c.inputs, "graph or fixture documents")->required();
    dec->add_option("--jobs,-j", c.jobs, "parallel inputs")->capture_default_str();
    dec->add_option("--audit-log", c.audit_log, "append edge exchanges here");
    common(dec);
    auto* ver = app.add_subcommand("verify", "check a decomposition document");
    ver->add_option("--ell,-l", c.ell, "path length")->required();
    ver->add_option("--graph,-g", c.graph, "graph or fixture document")->required();
    ver->add_option("--decomposition,-d", c.decomposition, "decomposition document")->required();
    common(ver);
    auto* gen = app.add_subcommand("generate", "bipartite circulant graph");
    gen->add_option("--n", c.n, "vertices per side")->required();
    gen->add_option("--offsets", c.offsets, "offsets, e.g. 0-3,7")->required();
    common(gen);
    auto* ora = app.add_subcommand("oracle", "exhaustive search on small graphs");
    ora->add_option("--ell,-l", c.ell, "path length")->required();
    ora->add_option("--input,-i", c.inputs, "graph document")->required()->expected(1);
    common(ora);
    auto* fix = app.add_subcommand("fixture", "emit a named fixture");
    fix->add_option("--name", c.name, "fixture name");
    fix->add_flag("--all", c.all, "write every fixture into the --output directory");
    common(fix);
    auto* st = app.add_subcommand("stats", "connectivity and degree summary");
    st->add_option("--input,-i", c.inputs, "graph document")->required()->expected(1);
    st->add_option("--ell,-l", c.ell, "path length for the threshold comparison");
    common(st);

    CLI11_PARSE(app, argc, argv);
    try {
        if (dec->parsed()) return cmd_decompose(c);
        if (ver->parsed()) return cmd_verify(c);
        if (gen->parsed()) return cmd_generate(c);
        if (ora->parsed()) return cmd_oracle(c);
        if (fix->parsed()) {
            if (!c.all && c.name.empty()) fail(Errc::UnknownFixture, "--name or --all required");
            return cmd_fixture(c);
        }
        if (st->parsed()) return cmd_stats(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Failure;
    }
    return Failure;
}
