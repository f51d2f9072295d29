// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
//
// wedgechain CLI: batch scenario runner and golden-vector checker.
//
//   wedgechain run --config scenario.cfg --out results/ [--seed N] [--baseline X]
//   wedgechain verify-vectors [--vectors crypto_vectors.txt] [--fixtures fixtures/wire]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "wedge/scenario.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, long long seed,
            const std::string& baseline) {
    wedge::ScenarioConfig cfg;
    try {
        cfg = wedge::ScenarioConfig::from_file(config_path);
        if (seed >= 0) cfg.seed = uint64_t(seed);
        if (!baseline.empty()) {
            if (baseline == "wedgechain") cfg.baseline = wedge::Wiring::Wedgechain;
            else if (baseline == "cloud_only") cfg.baseline = wedge::Wiring::CloudOnly;
            else if (baseline == "edge_baseline") cfg.baseline = wedge::Wiring::EdgeBaseline;
            else {
                std::cerr << "unknown baseline: " << baseline << "\n";
                return 2;
            }
            cfg.validate();
        }
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }

    wedge::Metrics metrics = wedge::run_scenario(cfg);
    wedge::emit_csv(metrics, out_dir);

    uint64_t p2_done = 0, writes = 0;
    for (const auto& op : metrics.ops) {
        if (op.kind == wedge::OpKindTag::Add || op.kind == wedge::OpKindTag::Put) {
            writes++;
            if (op.status == wedge::OpStatus::Phase2) p2_done++;
        }
    }
    std::cout << "ops=" << metrics.ops.size() << " writes=" << writes
              << " phase2=" << p2_done << " blocks=" << metrics.blocks.size()
              << " verdicts=" << metrics.verdicts.size()
              << " merges=" << metrics.merges_completed << "\n";
    std::cout << "p1 median=" << metrics.percentile_p1(0.5)
              << "ms p2 median=" << metrics.percentile_p2(0.5) << "ms"
              << (metrics.truncated ? "  [TRUNCATED at limit_ms]" : "") << "\n";
    std::cout << "wrote ops.csv messages.csv verdicts.csv timeline.csv to " << out_dir << "\n";
    return metrics.truncated ? 1 : 0;
}

int check_vectors(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return 2;
    }
    std::string line;
    int n = 0, bad = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto sp = line.find(' ');
        if (sp == std::string::npos) {
            std::cerr << "malformed vector line: " << line << "\n";
            bad++;
            continue;
        }
        wedge::Bytes input = wedge::from_hex(line.substr(0, sp));
        std::string want = line.substr(sp + 1);
        std::string got = wedge::hash(input).hex();
        n++;
        if (got != want) {
            std::cerr << "MISMATCH input=" << line.substr(0, sp) << " got=" << got
                      << " want=" << want << "\n";
            bad++;
        }
    }
    std::cout << "crypto vectors: " << (n - bad) << "/" << n << " ok\n";
    return bad == 0 ? 0 : 1;
}

int check_fixtures(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(dir)) {
        std::cerr << "fixtures directory not found: " << dir << "\n";
        return 2;
    }
    int n = 0, bad = 0;
    for (const auto& ent : fs::directory_iterator(dir)) {
        if (ent.path().extension() != ".bin") continue;
        std::ifstream f(ent.path(), std::ios::binary);
        std::ostringstream buf;
        buf << f.rdbuf();
        std::string raw = buf.str();
        n++;
        try {
            wedge::WireMessage msg = wedge::decode(
                {reinterpret_cast<const uint8_t*>(raw.data()), raw.size()});
            wedge::Bytes re = wedge::encode(msg);
            if (std::string(re.begin(), re.end()) != raw) {
                std::cerr << "re-encode mismatch: " << ent.path().filename() << "\n";
                bad++;
            }
        } catch (const std::exception& e) {
            std::cerr << "decode failed: " << ent.path().filename() << ": " << e.what() << "\n";
            bad++;
        }
    }
    std::cout << "wire fixtures: " << (n - bad) << "/" << n << " ok\n";
    return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wedgechain: edge-cloud store simulator with lazy certification"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one scenario and emit metrics CSVs");
    std::string config_path, out_dir = "out", baseline;
    long long seed = -1;
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--out", out_dir, "output directory for CSVs");
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--baseline", baseline, "wedgechain|cloud_only|edge_baseline");

    auto* vv = app.add_subcommand("verify-vectors", "check crypto and wire golden vectors");
    std::string vectors_path = "crypto_vectors.txt", fixtures_dir = "fixtures/wire";
    vv->add_option("--vectors", vectors_path, "crypto vector file");
    vv->add_option("--fixtures", fixtures_dir, "wire fixture directory");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_dir, seed, baseline);
    if (vv->parsed()) {
        int a = check_vectors(vectors_path);
        int b = check_fixtures(fixtures_dir);
        return a != 0 ? a : b;
    }
    return 0;
}
