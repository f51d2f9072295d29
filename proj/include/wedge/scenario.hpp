// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "wedge/adversary.hpp"
#include "wedge/client.hpp"
#include "wedge/cloud.hpp"
#include "wedge/edge.hpp"

namespace wedge {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class OpMix : uint8_t { Log = 0, Kv = 1 };

struct ScenarioConfig {
    Wiring baseline = Wiring::Wedgechain;
    uint64_t seed = 1;
    double limit_ms = 600000;

    // topology
    uint32_t clients = 1;
    std::string client_site = "C";
    std::string edge_site = "C";
    std::string cloud_site = "V";
    std::map<std::string, std::map<std::string, double>> rtt_overrides;
    double jitter_pct = 0;
    double drop_pct = 0;

    // workload
    uint64_t ops_per_client = 100;
    double op_interval_ms = 1.0;
    OpMix op_mix = OpMix::Log;
    double read_ratio = 0;
    uint32_t value_size_bytes = 100;
    uint64_t key_range = 1000;
    uint32_t batch_size = 100;

    // protocol
    double flush_interval_ms = 0;
    double noop_interval_ms = 0;
    double gossip_interval_ms = 0;
    double freshness_window_ms = 5000;
    double dispute_timeout_ms = -1;  // <0: auto, 10x the edge-cloud RTT
    int max_get_retries = 3;
    double retry_delay_ms = 100;
    double client_tick_ms = 250;

    // index
    bool index_enabled = true;
    uint32_t lsm_levels = 4;
    std::vector<uint32_t> lsm_thresholds{10, 10, 100, 1000};
    uint32_t page_size = 64;

    // cloud cost model
    double certify_per_op_ms = 0;

    // fault injection
    FaultSpec fault;

    // harness
    bool record_messages = true;
    bool audit_merges = false;

    static ScenarioConfig parse(const std::string& text);
    static ScenarioConfig from_file(const std::filesystem::path& path);
    void validate() const;
    double edge_cloud_rtt() const;
    double effective_dispute_timeout() const;
};

// Everything a run is made of; kept alive for post-run inspection.
struct World {
    KeyDirectory dir;
    Metrics metrics;
    std::unique_ptr<CloudNode> cloud;
    std::unique_ptr<CloudOnlyNode> cloud_only;
    std::unique_ptr<EdgeNode> edge;
    std::unique_ptr<FaultyEdge> faulty_edge;
    std::vector<std::unique_ptr<ClientNode>> clients;
    std::unique_ptr<SimNet> net;

    EdgeNode* edge_node();  // whichever of edge/faulty_edge exists
};

using EntryStream = std::vector<std::shared_ptr<const Entry>>;

KeyPair derive_keys(uint64_t seed, NodeId node);

// Pre-signed write entries for one client, exactly what the plan generator
// would produce. Lets several runs share one stream (seq-prefix reuse).
EntryStream build_client_entries(const ScenarioConfig& cfg, uint32_t client_id, uint64_t count);

std::unique_ptr<World> build_world(const ScenarioConfig& cfg,
                                   const std::map<uint32_t, const EntryStream*>* streams = nullptr);
void run_world(World& world, const ScenarioConfig& cfg);

Metrics run_scenario(const ScenarioConfig& cfg);
std::unique_ptr<World> run_scenario_world(
    const ScenarioConfig& cfg,
    const std::map<uint32_t, const EntryStream*>* streams = nullptr);

// CSV emitters; schemas in METRICS.md. String forms feed determinism checks.
std::string csv_ops(const Metrics& m);
std::string csv_messages(const Metrics& m);
std::string csv_verdicts(const Metrics& m);
std::string csv_timeline(const Metrics& m);
void emit_csv(const Metrics& m, const std::filesystem::path& out_dir);

const char* op_status_name(OpStatus s);
const char* verdict_reason_name(VerdictReason r);

}  // namespace wedge
