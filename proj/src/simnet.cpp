// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/simnet.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace wedge {

double LatencyConfig::rtt(NodeId a, NodeId b) const {
    auto pa = placement.find(a);
    auto pb = placement.find(b);
    if (pa == placement.end() || pb == placement.end())
        throw std::runtime_error("node not placed: " + (pa == placement.end() ? a.str() : b.str()));
    if (pa->second == pb->second) return 0;
    auto row = rtt_ms.find(pa->second);
    if (row != rtt_ms.end()) {
        auto cell = row->second.find(pb->second);
        if (cell != row->second.end()) return cell->second;
    }
    row = rtt_ms.find(pb->second);
    if (row != rtt_ms.end()) {
        auto cell = row->second.find(pa->second);
        if (cell != row->second.end()) return cell->second;
    }
    throw std::runtime_error("no RTT configured between sites " + pa->second + " and " + pb->second);
}

void SimNet::register_periodic(NodeId node, uint32_t kind, double interval, double first_at) {
    periodics_.push_back({node, kind, interval});
    Event ev;
    ev.at = first_at;
    ev.seq = seq_++;
    ev.is_timer = true;
    ev.periodic = true;
    ev.dst = node;
    ev.timer_kind = kind;
    queue_.push(std::move(ev));
}

void SimNet::schedule_timer(NodeId node, uint32_t kind, double at) {
    Event ev;
    ev.at = at;
    ev.seq = seq_++;
    ev.is_timer = true;
    ev.dst = node;
    ev.timer_kind = kind;
    queue_.push(std::move(ev));
    pending_work_++;
}

void SimNet::send(NodeId src, NodeId dst, WireMessage msg, double now) {
    if (latency_.drop_pct > 0 && rng_.unit() * 100.0 < latency_.drop_pct) {
        drops_++;
        return;
    }
    double one_way = latency_.rtt(src, dst) / 2.0;
    if (latency_.jitter_pct > 0) {
        one_way *= 1.0 + latency_.jitter_pct / 100.0 * (2.0 * rng_.unit() - 1.0);
    }
    double delay = std::max(latency_.floor_ms, one_way);
    Event ev;
    ev.at = now + delay;
    ev.seq = seq_++;
    ev.src = src;
    ev.dst = dst;
    // gossip is housekeeping: with a cadence shorter than the one-way delay
    // there is always one in flight, and it must not keep the loop alive
    ev.counted = !std::holds_alternative<GossipMsg>(msg);
    ev.msg = std::move(msg);
    queue_.push(std::move(ev));
    if (ev.counted) pending_work_++;
}

void SimNet::apply(const Actions& actions, NodeId origin) {
    for (const auto& ob : actions.out) send(origin, ob.dst, ob.msg, now_);
    for (const auto& tr : actions.timers) schedule_timer(origin, tr.kind, tr.at);
}

bool SimNet::all_idle() const {
    for (const auto& [id, node] : nodes_) {
        if (!node->idle()) return false;
    }
    return true;
}

RunStats SimNet::run(double limit_ms) {
    RunStats stats;
    const bool debug_loop = std::getenv("WEDGE_DEBUG_LOOP") != nullptr;
    while (!queue_.empty()) {
        // With no real work left, housekeeping timers alone never rescue the
        // run; stop instead of ticking forever.
        if (queue_.top().is_timer && queue_.top().periodic) {
            if (debug_loop)
                std::fprintf(stderr, "t=%.1f periodic top kind=%u pending=%llu idle=%d\n",
                             queue_.top().at, queue_.top().timer_kind,
                             (unsigned long long)pending_work_, int(all_idle()));
            if (pending_work_ == 0 && all_idle()) break;
        }
        Event ev = queue_.top();
        queue_.pop();
        if (ev.at > limit_ms) {
            stats.truncated = true;
            now_ = limit_ms;
            break;
        }
        now_ = ev.at;

        if (ev.is_timer) {
            if (!ev.periodic) pending_work_--;
            auto it = nodes_.find(ev.dst);
            if (it == nodes_.end()) throw std::runtime_error("timer for unknown node " + ev.dst.str());
            Actions actions = it->second->on_timer(ev.timer_kind, now_);
            apply(actions, ev.dst);
            if (ev.periodic) {
                for (const auto& p : periodics_) {
                    if (p.node == ev.dst && p.kind == ev.timer_kind) {
                        Event next = ev;
                        next.at = now_ + p.interval;
                        next.seq = seq_++;
                        queue_.push(std::move(next));
                        break;
                    }
                }
            }
            continue;
        }

        auto it = nodes_.find(ev.dst);
        if (it == nodes_.end()) throw std::runtime_error("message for unknown node " + ev.dst.str());
        INode* node = it->second;

        if (!ev.ready) {
            double busy = busy_until_.contains(ev.dst) ? busy_until_[ev.dst] : 0;
            double start = std::max(ev.at, busy);
            double svc = node->service_ms(ev.msg);
            double done = start + svc;
            if (done > ev.at) {
                busy_until_[ev.dst] = done;
                Event again = std::move(ev);
                again.at = done;
                again.seq = seq_++;
                again.ready = true;
                queue_.push(std::move(again));
                continue;
            }
        }

        if (ev.counted) pending_work_--;
        stats.delivered++;
        if (record_trace_) {
            trace_.push_back({now_, ev.src, ev.dst, kind_name(ev.msg),
                              uint32_t(encode(ev.msg).size())});
        }
        Actions actions = node->on_message(ev.src, ev.msg, now_);
        apply(actions, ev.dst);
    }
    stats.end_time = now_;
    stats.dropped = drops_;
    return stats;
}

}  // namespace wedge
