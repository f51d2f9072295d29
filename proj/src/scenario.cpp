// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wedge {

namespace {

// Round-trip times from the deployment the latency presets model:
// California to {California, Oregon, Virginia, Ireland, Mumbai}.
const std::map<std::string, double>& c_row() {
    static const std::map<std::string, double> row{
        {"C", 0}, {"O", 19}, {"V", 61}, {"I", 141}, {"M", 238}};
    return row;
}

double preset_rtt(const std::string& a, const std::string& b) {
    if (a == b) return 0;
    const auto& row = c_row();
    auto ia = row.find(a), ib = row.find(b);
    if (ia == row.end() || ib == row.end()) return -1;
    if (a == "C") return ib->second;
    if (b == "C") return ia->second;
    return ia->second + ib->second;  // non-C pairs approximated through C
}

uint64_t mix64(uint64_t a, uint64_t b) {
    uint64_t x = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDULL;
    x ^= x >> 33;
    return x;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double num(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
}

bool boolean(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

}  // namespace

double ScenarioConfig::edge_cloud_rtt() const {
    const std::string& a = baseline == Wiring::CloudOnly ? client_site : edge_site;
    auto ia = rtt_overrides.find(a);
    if (ia != rtt_overrides.end()) {
        auto ib = ia->second.find(cloud_site);
        if (ib != ia->second.end()) return ib->second;
    }
    double r = preset_rtt(a, cloud_site);
    if (r < 0) throw ConfigError("no RTT between sites " + a + " and " + cloud_site);
    return r;
}

double ScenarioConfig::effective_dispute_timeout() const {
    if (dispute_timeout_ms >= 0) return dispute_timeout_ms;
    return 10.0 * std::max(edge_cloud_rtt(), 2.0);
}

ScenarioConfig ScenarioConfig::parse(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        line_no++;
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
        line = trim(line);
        if (line.empty()) continue;
        // accept both "key value" and "key = value"
        auto toks = split_ws(line);
        if (toks.size() >= 2 && toks[1] == "=") toks.erase(toks.begin() + 1);
        if (toks.size() < 2)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key value'");
        const std::string& key = toks[0];
        std::string value = toks[1];
        for (size_t i = 2; i < toks.size(); i++) value += " " + toks[i];

        if (key == "baseline") {
            if (value == "wedgechain") cfg.baseline = Wiring::Wedgechain;
            else if (value == "cloud_only") cfg.baseline = Wiring::CloudOnly;
            else if (value == "edge_baseline") cfg.baseline = Wiring::EdgeBaseline;
            else throw ConfigError("unknown baseline '" + value + "'");
        } else if (key == "seed") cfg.seed = uint64_t(num(key, value));
        else if (key == "limit_ms") cfg.limit_ms = num(key, value);
        else if (key == "clients") cfg.clients = uint32_t(num(key, value));
        else if (key == "client_site") cfg.client_site = value;
        else if (key == "edge_site") cfg.edge_site = value;
        else if (key == "cloud_site") cfg.cloud_site = value;
        else if (key == "rtt") {
            auto parts = split_ws(value);
            if (parts.size() != 3) throw ConfigError("rtt expects: rtt SITE SITE MS");
            double ms = num(key, parts[2]);
            cfg.rtt_overrides[parts[0]][parts[1]] = ms;
            cfg.rtt_overrides[parts[1]][parts[0]] = ms;
        } else if (key == "jitter_pct") cfg.jitter_pct = num(key, value);
        else if (key == "drop_pct") cfg.drop_pct = num(key, value);
        else if (key == "ops_per_client") cfg.ops_per_client = uint64_t(num(key, value));
        else if (key == "op_interval_ms") cfg.op_interval_ms = num(key, value);
        else if (key == "op_mix") {
            if (value == "log") cfg.op_mix = OpMix::Log;
            else if (value == "kv") cfg.op_mix = OpMix::Kv;
            else throw ConfigError("op_mix must be log or kv");
        } else if (key == "read_ratio") cfg.read_ratio = num(key, value);
        else if (key == "value_size_bytes") cfg.value_size_bytes = uint32_t(num(key, value));
        else if (key == "key_range") cfg.key_range = uint64_t(num(key, value));
        else if (key == "batch_size") cfg.batch_size = uint32_t(num(key, value));
        else if (key == "flush_interval_ms") cfg.flush_interval_ms = num(key, value);
        else if (key == "noop_interval_ms") cfg.noop_interval_ms = num(key, value);
        else if (key == "gossip_interval_ms") cfg.gossip_interval_ms = num(key, value);
        else if (key == "freshness_window_ms") cfg.freshness_window_ms = num(key, value);
        else if (key == "dispute_timeout_ms") cfg.dispute_timeout_ms = num(key, value);
        else if (key == "max_get_retries") cfg.max_get_retries = int(num(key, value));
        else if (key == "retry_delay_ms") cfg.retry_delay_ms = num(key, value);
        else if (key == "client_tick_ms") cfg.client_tick_ms = num(key, value);
        else if (key == "index_enabled") cfg.index_enabled = boolean(key, value);
        else if (key == "lsm_levels") cfg.lsm_levels = uint32_t(num(key, value));
        else if (key == "lsm_thresholds") {
            cfg.lsm_thresholds.clear();
            std::string item;
            std::istringstream list(value);
            while (std::getline(list, item, ',')) {
                item = trim(item);
                if (!item.empty()) cfg.lsm_thresholds.push_back(uint32_t(num(key, item)));
            }
        } else if (key == "page_size") cfg.page_size = uint32_t(num(key, value));
        else if (key == "certify_per_op_ms") cfg.certify_per_op_ms = num(key, value);
        else if (key == "fault") {
            using B = FaultSpec::Behavior;
            if (value == "none") cfg.fault.behavior = B::None;
            else if (value == "equivocate") cfg.fault.behavior = B::Equivocate;
            else if (value == "drop_entry") cfg.fault.behavior = B::DropEntry;
            else if (value == "wrong_digest") cfg.fault.behavior = B::WrongDigest;
            else if (value == "omit_block") cfg.fault.behavior = B::OmitBlock;
            else if (value == "stale_snapshot") cfg.fault.behavior = B::StaleSnapshot;
            else throw ConfigError("unknown fault '" + value + "'");
        } else if (key == "fault_bid") cfg.fault.bid = uint64_t(num(key, value));
        else if (key == "fault_victim")
            cfg.fault.victim = NodeId{NodeKind::Client, uint32_t(num(key, value))};
        else if (key == "fault_seq") cfg.fault.drop_seq = uint64_t(num(key, value));
        else if (key == "fault_age_ms") cfg.fault.age_ms = num(key, value);
        else if (key == "fault_after_ms") cfg.fault.after_ms = num(key, value);
        else if (key == "fault_after_msgs") cfg.fault.after_msgs = uint64_t(num(key, value));
        else if (key == "record_messages") cfg.record_messages = boolean(key, value);
        else if (key == "audit_merges") cfg.audit_merges = boolean(key, value);
        else throw ConfigError("unknown config key '" + key + "' (line " +
                               std::to_string(line_no) + ")");
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void ScenarioConfig::validate() const {
    if (clients < 1) throw ConfigError("clients must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (ops_per_client < 1) throw ConfigError("ops_per_client must be >= 1");
    if (op_interval_ms <= 0) throw ConfigError("op_interval_ms must be > 0");
    if (read_ratio < 0 || read_ratio > 1) throw ConfigError("read_ratio must be in [0,1]");
    if (lsm_levels < 2) throw ConfigError("lsm_levels must be >= 2");
    if (lsm_thresholds.size() != lsm_levels)
        throw ConfigError("lsm_thresholds must list exactly lsm_levels values");
    if (page_size < 1) throw ConfigError("page_size must be >= 1");
    if (freshness_window_ms <= 0) throw ConfigError("freshness_window_ms must be > 0");
    if (limit_ms <= 0) throw ConfigError("limit_ms must be > 0");
    if (key_range < 1) throw ConfigError("key_range must be >= 1");
    if (baseline != Wiring::Wedgechain && fault.behavior != FaultSpec::Behavior::None)
        throw ConfigError("fault injection applies to the wedgechain wiring only");
    if (fault.behavior == FaultSpec::Behavior::DropEntry ||
        fault.behavior == FaultSpec::Behavior::Equivocate) {
        if (fault.victim.kind != NodeKind::Client || fault.victim.id >= clients)
            throw ConfigError("fault_victim must name a configured client");
    }
    if (fault.behavior == FaultSpec::Behavior::StaleSnapshot && fault.age_ms <= 0)
        throw ConfigError("stale_snapshot needs fault_age_ms > 0");
    // reject sites the latency model cannot place (unless overridden)
    for (const std::string& site : {client_site, edge_site, cloud_site}) {
        if (c_row().contains(site) || rtt_overrides.contains(site)) continue;
        throw ConfigError("unknown site '" + site + "' (no preset RTT and no rtt override)");
    }
}

KeyPair derive_keys(uint64_t seed, NodeId node) {
    ByteWriter w;
    w.raw(as_span(std::string_view("wedge-key")));
    w.u64(seed);
    w.u8(uint8_t(node.kind));
    w.u32(node.id);
    Digest d = hash(w.buffer());
    return keygen(d.bytes, node);
}

namespace {

struct PlanBuild {
    std::vector<PlannedOp> plan;
    std::vector<Entry*> to_sign;  // entries awaiting signatures (parallelizable)
    std::vector<std::shared_ptr<Entry>> owned;
};

Bytes random_payload(Rng& rng, uint32_t size) {
    Bytes out(size);
    for (auto& b : out) b = uint8_t(rng.next_u64());
    return out;
}

// Serial part of plan generation: op kinds, times, keys, payloads.
PlanBuild build_plan_skeleton(const ScenarioConfig& cfg, uint32_t client_id,
                              const EntryStream* stream) {
    PlanBuild out;
    NodeId me{NodeKind::Client, client_id};
    Rng rng(mix64(cfg.seed, mix64(0x706C616E, client_id)));
    double stagger = cfg.op_interval_ms * double(client_id) / double(cfg.clients);
    uint64_t seq = 0;
    for (uint64_t i = 0; i < cfg.ops_per_client; i++) {
        PlannedOp op;
        op.at = cfg.op_interval_ms * double(i + 1) + stagger;
        bool is_read = rng.unit() < cfg.read_ratio;
        if (is_read) {
            if (cfg.op_mix == OpMix::Kv) {
                op.kind = OpKindTag::Get;
                op.key = rng.below(cfg.key_range);
            } else {
                op.kind = OpKindTag::Read;
                op.bid_exact = false;
            }
            out.plan.push_back(op);
            continue;
        }
        op.kind = cfg.op_mix == OpMix::Kv ? OpKindTag::Put : OpKindTag::Add;
        if (stream) {
            if (seq >= stream->size())
                throw ConfigError("shared entry stream shorter than the workload");
            op.entry = (*stream)[seq];
            seq++;
        } else {
            auto entry = std::make_shared<Entry>();
            entry->client = me;
            entry->seq = seq++;
            if (cfg.op_mix == OpMix::Kv) {
                Put put;
                put.key = rng.below(cfg.key_range);
                put.value = random_payload(rng, cfg.value_size_bytes);
                entry->op = std::move(put);
            } else {
                entry->op = LogData{random_payload(rng, cfg.value_size_bytes)};
            }
            out.to_sign.push_back(entry.get());
            out.owned.push_back(entry);
            op.entry = entry;
        }
        out.plan.push_back(std::move(op));
    }
    // fault-targeted reads: make sure somebody actually asks for the omitted
    // block, well after it sealed and gossip has had a chance to cover it
    if (cfg.fault.behavior == FaultSpec::Behavior::OmitBlock && client_id == 0) {
        double t_end = cfg.op_interval_ms * double(cfg.ops_per_client + 1) +
                       cfg.edge_cloud_rtt() + 20.0;
        PlannedOp op;
        op.at = t_end;
        op.kind = OpKindTag::Read;
        op.bid = cfg.fault.bid;
        op.bid_exact = true;
        out.plan.push_back(op);
    }
    // stale-snapshot runs ask for keys once the interceptor has enough
    // history to time-travel, while writes still drive fresh merges
    if (cfg.fault.behavior == FaultSpec::Behavior::StaleSnapshot && client_id == 0) {
        double start = cfg.fault.age_ms + 500.0;
        for (int i = 0; i < 25; i++) {
            PlannedOp op;
            op.at = start + 20.0 * i;
            op.kind = OpKindTag::Get;
            op.key = rng.below(cfg.key_range);
            out.plan.push_back(op);
        }
    }
    std::stable_sort(out.plan.begin(), out.plan.end(),
                     [](const PlannedOp& a, const PlannedOp& b) { return a.at < b.at; });
    return out;
}

void sign_pending(const KeyPair& kp, std::vector<Entry*>& entries) {
    int64_t n = int64_t(entries.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
    for (int64_t i = 0; i < n; i++) {
        entries[i]->client_sig = sign(kp.secret_key, as_span(entry_sign_payload(*entries[i])));
    }
}

}  // namespace

EntryStream build_client_entries(const ScenarioConfig& cfg, uint32_t client_id, uint64_t count) {
    ScenarioConfig local = cfg;
    local.ops_per_client = count;
    local.read_ratio = 0;
    PlanBuild build = build_plan_skeleton(local, client_id, nullptr);
    KeyPair kp = derive_keys(cfg.seed, NodeId{NodeKind::Client, client_id});
    sign_pending(kp, build.to_sign);
    EntryStream stream;
    stream.reserve(build.owned.size());
    for (auto& e : build.owned) stream.push_back(std::move(e));
    return stream;
}

EdgeNode* World::edge_node() { return faulty_edge ? &faulty_edge->inner() : edge.get(); }

std::unique_ptr<World> build_world(const ScenarioConfig& cfg,
                                   const std::map<uint32_t, const EntryStream*>* streams) {
    cfg.validate();
    auto world = std::make_unique<World>();
    world->metrics.audit_merges = cfg.audit_merges;

    NodeId cloud_id{NodeKind::Cloud, 0};
    NodeId edge_id{NodeKind::Edge, 0};
    KeyPair cloud_keys = derive_keys(cfg.seed, cloud_id);
    KeyPair edge_keys = derive_keys(cfg.seed, edge_id);
    world->dir.keys[cloud_id] = cloud_keys.public_key;
    world->dir.keys[edge_id] = edge_keys.public_key;
    std::vector<KeyPair> client_keys;
    for (uint32_t c = 0; c < cfg.clients; c++) {
        NodeId id{NodeKind::Client, c};
        client_keys.push_back(derive_keys(cfg.seed, id));
        world->dir.keys[id] = client_keys.back().public_key;
    }

    LatencyConfig lat;
    lat.jitter_pct = cfg.jitter_pct;
    lat.drop_pct = cfg.drop_pct;
    lat.rtt_ms = cfg.rtt_overrides;
    for (const auto& [a, ra] : c_row()) {
        for (const auto& [b, rb] : c_row()) {
            if (!lat.rtt_ms.contains(a) || !lat.rtt_ms[a].contains(b)) {
                lat.rtt_ms[a][b] = preset_rtt(a, b);
            }
        }
    }
    lat.placement[cloud_id] = cfg.cloud_site;
    lat.placement[edge_id] = cfg.edge_site;
    for (uint32_t c = 0; c < cfg.clients; c++)
        lat.placement[NodeId{NodeKind::Client, c}] = cfg.client_site;

    world->net = std::make_unique<SimNet>(lat, cfg.seed, cfg.record_messages);

    NodeId client_target = edge_id;
    if (cfg.baseline == Wiring::CloudOnly) {
        world->cloud_only = std::make_unique<CloudOnlyNode>(
            cloud_id, cloud_keys, &world->dir, cfg.batch_size, cfg.certify_per_op_ms,
            &world->metrics);
        world->net->add_node(world->cloud_only.get());
        client_target = cloud_id;
    } else {
        CloudConfig ccfg;
        ccfg.page_size = cfg.page_size;
        ccfg.lsm_levels = cfg.lsm_levels;
        ccfg.l0_threshold = cfg.lsm_thresholds[0];
        ccfg.certify_per_op_ms = cfg.certify_per_op_ms;
        ccfg.batch_size_hint = cfg.batch_size;
        world->cloud =
            std::make_unique<CloudNode>(cloud_id, cloud_keys, &world->dir, ccfg, &world->metrics);

        EdgeConfig ecfg;
        ecfg.batch_size = cfg.batch_size;
        ecfg.flush_interval_ms = cfg.flush_interval_ms;
        ecfg.noop_interval_ms = cfg.noop_interval_ms;
        ecfg.lsm_levels = cfg.lsm_levels;
        ecfg.lsm_thresholds = cfg.lsm_thresholds;
        ecfg.index_enabled = cfg.index_enabled;
        ecfg.certify_via_upload = cfg.baseline == Wiring::EdgeBaseline;
        if (cfg.fault.behavior == FaultSpec::Behavior::None) {
            world->edge = std::make_unique<EdgeNode>(edge_id, edge_keys, cloud_id, &world->dir,
                                                     ecfg, &world->metrics);
        } else {
            world->faulty_edge = std::make_unique<FaultyEdge>(edge_id, edge_keys, cloud_id,
                                                              &world->dir, ecfg, &world->metrics,
                                                              cfg.fault);
        }
        world->edge_node()->install_global_root(world->cloud->initial_global_root(edge_id));
        world->net->add_node(world->cloud.get());
        world->net->add_node(world->faulty_edge ? static_cast<INode*>(world->faulty_edge.get())
                                                : static_cast<INode*>(world->edge.get()));

        if (cfg.gossip_interval_ms > 0) {
            std::map<NodeId, std::vector<NodeId>> targets;
            for (uint32_t c = 0; c < cfg.clients; c++)
                targets[edge_id].push_back(NodeId{NodeKind::Client, c});
            world->cloud->set_gossip_targets(std::move(targets));
            world->net->register_periodic(cloud_id, kCloudGossip, cfg.gossip_interval_ms,
                                          cfg.gossip_interval_ms);
        }
        if (cfg.flush_interval_ms > 0 || cfg.noop_interval_ms > 0) {
            double tick = cfg.flush_interval_ms > 0 ? cfg.flush_interval_ms : cfg.noop_interval_ms;
            if (cfg.noop_interval_ms > 0) tick = std::min(tick, cfg.noop_interval_ms);
            tick = std::max(tick / 2.0, 0.5);
            world->net->register_periodic(edge_id, kEdgeTick, tick, tick);
        }
    }

    ClientConfig clcfg;
    clcfg.window_ms = cfg.freshness_window_ms;
    clcfg.dispute_timeout_ms = cfg.effective_dispute_timeout();
    clcfg.max_get_retries = cfg.max_get_retries;
    clcfg.retry_delay_ms = cfg.retry_delay_ms;
    clcfg.tick_interval_ms = cfg.client_tick_ms;
    clcfg.lsm_levels = cfg.lsm_levels;
    clcfg.wiring = cfg.baseline;

    // serial skeletons first (all rng draws), then one parallel signing pass
    std::vector<PlanBuild> builds;
    builds.reserve(cfg.clients);
    std::vector<Entry*> all_to_sign;
    for (uint32_t c = 0; c < cfg.clients; c++) {
        const EntryStream* stream = nullptr;
        if (streams) {
            if (auto it = streams->find(c); it != streams->end()) stream = it->second;
        }
        builds.push_back(build_plan_skeleton(cfg, c, stream));
        for (Entry* e : builds.back().to_sign) all_to_sign.push_back(e);
    }
    {
        // group by client so each entry is signed with its owner's key
        size_t idx = 0;
        for (uint32_t c = 0; c < cfg.clients; c++) {
            (void)idx;
            sign_pending(client_keys[c], builds[c].to_sign);
        }
    }

    for (uint32_t c = 0; c < cfg.clients; c++) {
        NodeId id{NodeKind::Client, c};
        auto client = std::make_unique<ClientNode>(id, client_keys[c], client_target, cloud_id,
                                                   &world->dir, clcfg, std::move(builds[c].plan),
                                                   &world->metrics);
        world->net->add_node(client.get());
        if (client->first_op_at() >= 0)
            world->net->schedule_timer(id, kClientWorkload, client->first_op_at());
        world->net->register_periodic(id, kClientTick, cfg.client_tick_ms, cfg.client_tick_ms);
        world->clients.push_back(std::move(client));
    }
    return world;
}

void run_world(World& world, const ScenarioConfig& cfg) {
    RunStats stats = world.net->run(cfg.limit_ms);
    world.metrics.truncated = stats.truncated;
    world.metrics.end_time = stats.end_time;
    world.metrics.messages = world.net->trace();
    world.metrics.finalize_blocks();
}

std::unique_ptr<World> run_scenario_world(
    const ScenarioConfig& cfg, const std::map<uint32_t, const EntryStream*>* streams) {
    auto world = build_world(cfg, streams);
    run_world(*world, cfg);
    return world;
}

Metrics run_scenario(const ScenarioConfig& cfg) {
    auto world = run_scenario_world(cfg);
    return std::move(world->metrics);
}

const char* op_status_name(OpStatus s) {
    switch (s) {
        case OpStatus::Pending: return "pending";
        case OpStatus::Phase1: return "phase1";
        case OpStatus::Phase2: return "phase2";
        case OpStatus::Disputed: return "disputed";
        case OpStatus::Unavailable: return "unavailable";
        case OpStatus::Found: return "found";
        case OpStatus::Absent: return "absent";
        case OpStatus::Stale: return "stale";
        case OpStatus::Invalid: return "invalid";
    }
    return "?";
}

const char* verdict_reason_name(VerdictReason r) {
    switch (r) {
        case VerdictReason::None: return "none";
        case VerdictReason::Equivocation: return "equivocation";
        case VerdictReason::Lied: return "lied";
        case VerdictReason::Omission: return "omission";
        case VerdictReason::BadMerge: return "bad_merge";
        case VerdictReason::InvalidEvidence: return "invalid_evidence";
    }
    return "?";
}

namespace {

const char* kind_tag_name(OpKindTag k) {
    switch (k) {
        case OpKindTag::Add: return "add";
        case OpKindTag::Put: return "put";
        case OpKindTag::Read: return "read";
        case OpKindTag::Get: return "get";
    }
    return "?";
}

void append_ms(std::string& out, double v) {
    if (v < 0 || std::isinf(v)) return;  // empty field
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    out += buf;
}

}  // namespace

std::string csv_ops(const Metrics& m) {
    std::string out = "op_id,client,kind,seq,bid,issued_ms,phase1_ms,phase2_ms,status\n";
    for (size_t i = 0; i < m.ops.size(); i++) {
        const OpRow& r = m.ops[i];
        out += std::to_string(i);
        out += ',';
        out += r.client.str();
        out += ',';
        out += kind_tag_name(r.kind);
        out += ',';
        out += std::to_string(r.seq);
        out += ',';
        if (r.has_bid) out += std::to_string(r.bid);
        out += ',';
        append_ms(out, r.issued_at);
        out += ',';
        append_ms(out, r.phase1_at);
        out += ',';
        append_ms(out, r.phase2_at);
        out += ',';
        out += op_status_name(r.status);
        out += '\n';
    }
    return out;
}

std::string csv_messages(const Metrics& m) {
    std::string out = "time_ms,src,dst,msg_kind,size_bytes\n";
    for (const TraceRow& r : m.messages) {
        append_ms(out, r.t);
        out += ',';
        out += r.src.str();
        out += ',';
        out += r.dst.str();
        out += ',';
        out += r.kind;
        out += ',';
        out += std::to_string(r.size);
        out += '\n';
    }
    return out;
}

std::string csv_verdicts(const Metrics& m) {
    std::string out = "time_ms,edge,reason,accuser\n";
    for (const VerdictRow& r : m.verdicts) {
        append_ms(out, r.t);
        out += ',';
        out += r.edge.str();
        out += ',';
        out += verdict_reason_name(r.reason);
        out += ',';
        out += r.accuser.str();
        out += '\n';
    }
    return out;
}

std::string csv_timeline(const Metrics& m) {
    // committed-block counts over time: one row per commit event
    struct Ev {
        double t;
        int which;  // 0: phase1, 1: phase2
    };
    std::vector<Ev> evs;
    for (const BlockRow& b : m.blocks) {
        if (b.p1_at >= 0 && !std::isinf(b.p1_at)) evs.push_back({b.p1_at, 0});
        if (b.p2_at >= 0 && !std::isinf(b.p2_at)) evs.push_back({b.p2_at, 1});
    }
    std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
        return a.t != b.t ? a.t < b.t : a.which < b.which;
    });
    std::string out = "time_ms,p1_count,p2_count\n";
    uint64_t p1 = 0, p2 = 0;
    for (const Ev& e : evs) {
        (e.which == 0 ? p1 : p2)++;
        append_ms(out, e.t);
        out += ',';
        out += std::to_string(p1);
        out += ',';
        out += std::to_string(p2);
        out += '\n';
    }
    return out;
}

void emit_csv(const Metrics& m, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    auto write = [&](const char* name, const std::string& content) {
        std::ofstream f(out_dir / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (out_dir / name).string());
        f << content;
    };
    write("ops.csv", csv_ops(m));
    write("messages.csv", csv_messages(m));
    write("verdicts.csv", csv_verdicts(m));
    write("timeline.csv", csv_timeline(m));
}

}  // namespace wedge
