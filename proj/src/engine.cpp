#include "hosim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace hosim {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kHeadingSigmaRad = 0.10;  // per-step turn of the random walk
constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

void hash_u64(uint64_t& h, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
}

void record_event(SimulationState& state, bool keep_log, EventType type, int64_t user,
                  int cell_from, int cell_to) {
  hash_u64(state.event_hash, static_cast<uint64_t>(state.step_index));
  hash_u64(state.event_hash, static_cast<uint64_t>(type));
  hash_u64(state.event_hash, static_cast<uint64_t>(user));
  hash_u64(state.event_hash, static_cast<uint64_t>(static_cast<int64_t>(cell_from)));
  hash_u64(state.event_hash, static_cast<uint64_t>(static_cast<int64_t>(cell_to)));
  if (keep_log) {
    state.event_log.push_back({state.step_index, type, user, cell_from, cell_to});
  }
}

BalancingFunction make_balancing(const Scenario& scenario, Policy policy) {
  const auto& p = scenario.policy;
  // the fixed-margin baseline is the order-0 development: HM == f0 everywhere
  const int order = policy == Policy::kFixedMargin ? 0 : p.order;
  return BalancingFunction(p.f0_db, p.hm_min_db, p.hm_max_db, order);
}

struct StepContext {
  const Scenario& scenario;
  BalancingFunction balancing;
  ShadowingField shadowing;
  double alpha;  // EMA factor for load smoothing
  double warmup_end_s;
  double thermal_noise_w;
  bool keep_event_log = false;
  std::ostream* hm_dump = nullptr;
};

StepContext make_context(const Scenario& scenario, Policy policy, bool keep_event_log,
                         std::ostream* hm_dump) {
  return StepContext{
      scenario,
      make_balancing(scenario, policy),
      ShadowingField(derive_seed(scenario.rng_seed, "shadow-field"),
                     scenario.propagation.shadowing_sigma_db, scenario.n_sites()),
      1.0 - std::exp(-scenario.snapshot_duration_s / scenario.policy.load_smoothing_tau_s),
      scenario.policy.warmup_fraction * scenario.sim_duration_s,
      dbm_to_watts(scenario.radio.thermal_noise_per_subcarrier_dbm),
      keep_event_log,
      hm_dump,
  };
}

void check_invariants(const SimulationState& state, const Scenario& scenario) {
  std::vector<int64_t> allocated(scenario.sites.size(), 0);
  for (const auto& user : state.sessions) {
    if (user.remaining_bytes <= 0.0) {
      throw ConsistencyError("user " + std::to_string(user.id) +
                             " active with no remaining bytes");
    }
    if (user.allocated_prbs < scenario.radio.min_prb_per_user ||
        user.allocated_prbs > scenario.radio.max_prb_per_user) {
      throw ConsistencyError("user " + std::to_string(user.id) +
                             " holds an allocation outside [min,max]");
    }
    allocated[static_cast<size_t>(user.serving_cell)] += user.allocated_prbs;
  }
  for (size_t c = 0; c < allocated.size(); ++c) {
    if (allocated[c] != state.occupied_prbs[c]) {
      throw ConsistencyError("cell " + std::to_string(c) + ": allocated " +
                             std::to_string(allocated[c]) + " != occupancy book " +
                             std::to_string(state.occupied_prbs[c]));
    }
    if (state.occupied_prbs[c] > scenario.sites[c].prb_capacity) {
      throw ConsistencyError("cell " + std::to_string(c) + ": occupancy above capacity");
    }
    if (state.loads.chi[c] < 0.0 || state.loads.chi[c] > 1.0) {
      throw ConsistencyError("cell " + std::to_string(c) + ": smoothed load outside [0,1]");
    }
  }
  const auto& t = state.totals;
  const int64_t active = static_cast<int64_t>(state.sessions.size());
  if (t.attempts != active + t.completed + t.blocked_coverage + t.blocked_resource + t.dropped) {
    throw ConsistencyError("conservation breach: attempts " + std::to_string(t.attempts) +
                           " != active " + std::to_string(active) + " + outcomes");
  }
}

void run_step(SimulationState& state, const StepContext& ctx) {
  const Scenario& sc = ctx.scenario;
  const double dt = sc.snapshot_duration_s;
  const int n_cells = sc.n_sites();

  // (1) clock
  state.clock_s += dt;
  state.step_index += 1;
  const bool in_measurement_window = state.clock_s > ctx.warmup_end_s;

  // (2) mobility
  for (auto& user : state.sessions) move_user(user, dt, sc.bounds);

  // (3) arrivals and admission control
  std::vector<int> free(static_cast<size_t>(n_cells));
  for (int c = 0; c < n_cells; ++c) {
    free[static_cast<size_t>(c)] =
        sc.sites[static_cast<size_t>(c)].prb_capacity - state.occupied_prbs[static_cast<size_t>(c)];
  }
  double total_weight = 0.0;
  for (const double w : sc.traffic.hotspot_weights) total_weight += w;

  const int64_t n_arrivals = state.arrivals_rng.poisson(sc.traffic.arrival_rate * dt);
  for (int64_t a = 0; a < n_arrivals; ++a) {
    const int64_t id = state.next_user_id++;

    // spatial placement: hotspot-weighted site pick, then uniform in a disc
    double pick = state.placement_rng.uniform01() * total_weight;
    int region = 0;
    for (; region < n_cells - 1; ++region) {
      pick -= sc.traffic.hotspot_weights[static_cast<size_t>(region)];
      if (pick < 0.0) break;
    }
    const double radius =
        sc.traffic.placement_radius_m * std::sqrt(state.placement_rng.uniform01());
    const double angle = state.placement_rng.uniform(0.0, kTwoPi);
    Point position{sc.sites[static_cast<size_t>(region)].position.x + radius * std::cos(angle),
                   sc.sites[static_cast<size_t>(region)].position.y + radius * std::sin(angle)};
    position.x = std::clamp(position.x, sc.bounds.x_min, sc.bounds.x_max);
    position.y = std::clamp(position.y, sc.bounds.y_min, sc.bounds.y_max);

    std::vector<double> shadow = ctx.shadowing.draw_for_user(id);
    auto rx = received_powers_dbm(sc.sites, position, shadow, sc.propagation);
    const CacDecision decision = admit(rx, free, sc.radio);

    state.totals.attempts += 1;
    if (in_measurement_window) state.metrics.attempts += 1;
    switch (decision.outcome) {
      case CacOutcome::kBlockedCoverage:
        state.totals.blocked_coverage += 1;
        if (in_measurement_window) state.metrics.blocked_coverage += 1;
        record_event(state, ctx.keep_event_log, EventType::kBlockCoverage, id, -1, -1);
        break;
      case CacOutcome::kBlockedResource:
        state.totals.blocked_resource += 1;
        if (in_measurement_window) state.metrics.blocked_resource += 1;
        record_event(state, ctx.keep_event_log, EventType::kBlockResource, id, -1,
                     decision.serving_cell);
        break;
      case CacOutcome::kAdmitted: {
        state.totals.admitted += 1;
        if (in_measurement_window) state.metrics.admitted += 1;
        UserSession user;
        user.id = id;
        user.position = position;
        user.serving_cell = decision.serving_cell;
        user.allocated_prbs = decision.granted_prbs;
        user.remaining_bytes = sc.traffic.file_size_bytes;
        user.admitted_at = state.clock_s;
        user.counted = in_measurement_window;
        user.shadow_db = std::move(shadow);
        user.rx_dbm = std::move(rx);
        user.mobility_rng =
            Rng(derive_seed(sc.rng_seed, "mobility", static_cast<uint64_t>(id)));
        const double heading = user.mobility_rng.uniform(0.0, kTwoPi);
        user.velocity = Vec2{sc.traffic.user_speed_mps * std::cos(heading),
                             sc.traffic.user_speed_mps * std::sin(heading)};
        state.occupied_prbs[static_cast<size_t>(decision.serving_cell)] += decision.granted_prbs;
        free[static_cast<size_t>(decision.serving_cell)] -= decision.granted_prbs;
        state.sessions.push_back(std::move(user));
        record_event(state, ctx.keep_event_log, EventType::kAdmit, id, -1,
                     decision.serving_cell);
        break;
      }
    }
  }

  // refresh per-user received powers once; phases 4/6/7 share them
  for (auto& user : state.sessions) {
    if (user.admitted_at == state.clock_s) continue;  // placed this step, rx is current
    user.rx_dbm = received_powers_dbm(sc.sites, user.position, user.shadow_db, sc.propagation);
  }

  // (4) handover processing, ascending user id
  if (state.step_index % sc.policy.ho_eval_every == 0) {
    for (auto& user : state.sessions) {
      const auto target =
          evaluate_handover(user.serving_cell, user.rx_dbm, free, state.hm, sc.neighbors,
                            sc.radio);
      if (target) {
        state.occupied_prbs[static_cast<size_t>(user.serving_cell)] -= user.allocated_prbs;
        free[static_cast<size_t>(user.serving_cell)] += user.allocated_prbs;
        const int granted =
            std::min(sc.radio.max_prb_per_user, free[static_cast<size_t>(*target)]);
        record_event(state, ctx.keep_event_log, EventType::kHandover, user.id,
                     user.serving_cell, *target);
        user.serving_cell = *target;
        user.allocated_prbs = granted;
        state.occupied_prbs[static_cast<size_t>(*target)] += granted;
        free[static_cast<size_t>(*target)] -= granted;
      }
    }
  }

  // (5) per-cell PRB reallocation in arrival order
  {
    std::vector<std::vector<size_t>> by_cell(static_cast<size_t>(n_cells));
    for (size_t i = 0; i < state.sessions.size(); ++i) {
      by_cell[static_cast<size_t>(state.sessions[i].serving_cell)].push_back(i);
    }
    for (int c = 0; c < n_cells; ++c) {
      auto& members = by_cell[static_cast<size_t>(c)];
      if (members.empty()) {
        state.occupied_prbs[static_cast<size_t>(c)] = 0;
        continue;
      }
      std::sort(members.begin(), members.end(), [&](size_t a, size_t b) {
        const auto& ua = state.sessions[a];
        const auto& ub = state.sessions[b];
        return ua.admitted_at != ub.admitted_at ? ua.admitted_at < ub.admitted_at
                                                : ua.id < ub.id;
      });
      std::vector<PrbClaim> claims;
      claims.reserve(members.size());
      for (const size_t i : members) {
        claims.push_back({state.sessions[i].id, state.sessions[i].admitted_at});
      }
      const auto alloc = reallocate_prbs(claims, sc.sites[static_cast<size_t>(c)].prb_capacity,
                                         sc.radio.min_prb_per_user, sc.radio.max_prb_per_user);
      int occupied = 0;
      for (size_t j = 0; j < members.size(); ++j) {
        state.sessions[members[j]].allocated_prbs = alloc[j];
        occupied += alloc[j];
      }
      state.occupied_prbs[static_cast<size_t>(c)] = occupied;
    }
  }

  // (6) SINR, throughput, file drain (loads are the previous snapshot's)
  for (auto& user : state.sessions) {
    const double sinr = sinr_linear(user.serving_cell, user.rx_dbm, sc.interference,
                                    state.loads.chi, ctx.thermal_noise_w);
    user.last_sinr_db = linear_to_db(sinr);
    const double per_prb = throughput_per_prb(sinr, sc.link_curve);
    const double rate_bps = user_throughput_bps(user.allocated_prbs, per_prb);
    user.remaining_bytes -= rate_bps * dt / 8.0;
  }

  // (7) completions, then coverage drops
  {
    std::erase_if(state.sessions, [&](UserSession& user) {
      if (user.remaining_bytes > 0.0) return false;
      state.totals.completed += 1;
      if (user.counted) {
        state.metrics.completed += 1;
        const double duration = state.clock_s - user.admitted_at;
        state.metrics.throughput_samples_bps.push_back(sc.traffic.file_size_bytes / duration);
      }
      state.occupied_prbs[static_cast<size_t>(user.serving_cell)] -= user.allocated_prbs;
      record_event(state, ctx.keep_event_log, EventType::kComplete, user.id, user.serving_cell,
                   -1);
      return true;
    });

    for (int c = 0; c < n_cells; ++c) {
      free[static_cast<size_t>(c)] = sc.sites[static_cast<size_t>(c)].prb_capacity -
                                     state.occupied_prbs[static_cast<size_t>(c)];
    }
    std::erase_if(state.sessions, [&](UserSession& user) {
      if (user.rx_dbm[static_cast<size_t>(user.serving_cell)] >=
          sc.radio.cac_signal_threshold_dbm) {
        return false;
      }
      const auto rescue = evaluate_handover(user.serving_cell, user.rx_dbm, free, state.hm,
                                            sc.neighbors, sc.radio);
      if (rescue) return false;  // an admissible target exists; next snapshot hands it over
      state.totals.dropped += 1;
      if (user.counted) state.metrics.dropped += 1;
      state.occupied_prbs[static_cast<size_t>(user.serving_cell)] -= user.allocated_prbs;
      free[static_cast<size_t>(user.serving_cell)] += user.allocated_prbs;
      record_event(state, ctx.keep_event_log, EventType::kDrop, user.id, user.serving_cell, -1);
      return true;
    });
  }

  // (8) load smoothing from instantaneous occupancy
  std::vector<double> occupancy(static_cast<size_t>(n_cells));
  for (int c = 0; c < n_cells; ++c) {
    occupancy[static_cast<size_t>(c)] =
        static_cast<double>(state.occupied_prbs[static_cast<size_t>(c)]) /
        static_cast<double>(sc.sites[static_cast<size_t>(c)].prb_capacity);
  }
  update_loads(state.loads, occupancy, ctx.alpha);

  // (9) margin adaptation. Margins follow the instantaneous occupancy so
  // they react at the blocking timescale; the smoothed chi stays behind the
  // interference term only.
  if (state.step_index % sc.policy.margin_update_every == 0) {
    update_margins(state.hm, occupancy, ctx.balancing, sc.neighbors);
  }
  if (ctx.hm_dump) {
    for (size_t e = 0; e < sc.neighbors.size(); ++e) {
      for (const int k : sc.neighbors[e]) {
        *ctx.hm_dump << format_double(state.clock_s) << ',' << e << ',' << k << ','
                     << format_double(state.hm.at(static_cast<int>(e), k)) << "\n";
      }
    }
  }

  // (10) metrics
  if (in_measurement_window) {
    for (const auto& user : state.sessions) {
      state.metrics.sinr_samples_db.push_back(user.last_sinr_db);
    }
    double deviation_sum = 0.0;
    int64_t pairs = 0;
    for (size_t e = 0; e < sc.neighbors.size(); ++e) {
      for (const int k : sc.neighbors[e]) {
        deviation_sum += std::abs(state.hm.at(static_cast<int>(e), k) - sc.policy.f0_db);
        ++pairs;
      }
    }
    state.metrics.hm_deviation_series_db.push_back(pairs ? deviation_sum / pairs : 0.0);
    state.metrics.record_load_snapshot(state.loads.chi);
  }

  check_invariants(state, sc);
}

}  // namespace

std::string policy_name(Policy policy) {
  return policy == Policy::kFixedMargin ? "fixed" : "auto";
}

const char* event_name(EventType t) {
  switch (t) {
    case EventType::kAdmit: return "admit";
    case EventType::kBlockCoverage: return "block_coverage";
    case EventType::kBlockResource: return "block_resource";
    case EventType::kHandover: return "handover";
    case EventType::kComplete: return "complete";
    case EventType::kDrop: return "drop";
  }
  return "?";
}

void move_user(UserSession& user, double dt_s, const Rect& bounds) {
  user.velocity = rotated(user.velocity, user.mobility_rng.normal(0.0, kHeadingSigmaRad));
  double x = user.position.x + user.velocity.x * dt_s;
  double y = user.position.y + user.velocity.y * dt_s;
  // reflect at the box walls (loop handles large overshoots)
  int guard = 0;
  while ((x < bounds.x_min || x > bounds.x_max) && guard++ < 64) {
    if (x < bounds.x_min) x = 2.0 * bounds.x_min - x;
    if (x > bounds.x_max) x = 2.0 * bounds.x_max - x;
    user.velocity.x = -user.velocity.x;
  }
  guard = 0;
  while ((y < bounds.y_min || y > bounds.y_max) && guard++ < 64) {
    if (y < bounds.y_min) y = 2.0 * bounds.y_min - y;
    if (y > bounds.y_max) y = 2.0 * bounds.y_max - y;
    user.velocity.y = -user.velocity.y;
  }
  user.position = {std::clamp(x, bounds.x_min, bounds.x_max),
                   std::clamp(y, bounds.y_min, bounds.y_max)};
}

SimulationState make_initial_state(const Scenario& scenario, Policy policy, uint64_t seed) {
  SimulationState state;
  state.occupied_prbs.assign(scenario.sites.size(), 0);
  state.loads.chi.assign(scenario.sites.size(), 0.0);
  state.loads.window_s = scenario.policy.load_smoothing_tau_s;
  // margins start at the planned value for either policy
  (void)policy;
  state.hm = HandoverMarginMatrix(scenario.n_sites(), scenario.policy.f0_db,
                                  scenario.policy.hysteresis_db);
  state.arrivals_rng = Rng(derive_seed(seed, "arrivals"));
  state.placement_rng = Rng(derive_seed(seed, "placement"));
  state.event_hash = kFnvOffset;
  return state;
}

void step(SimulationState& state, const Scenario& scenario, Policy policy) {
  const StepContext ctx = make_context(scenario, policy, false, nullptr);
  run_step(state, ctx);
}

RunResult run(const Scenario& scenario, Policy policy, const RunOptions& options) {
  Scenario sc = scenario;
  if (options.seed_override) sc.rng_seed = *options.seed_override;

  SimulationState state = make_initial_state(sc, policy, sc.rng_seed);
  const StepContext ctx = make_context(sc, policy, options.keep_event_log, options.hm_dump);

  const auto n_steps =
      static_cast<int64_t>(std::floor(sc.sim_duration_s / sc.snapshot_duration_s + 1e-9));
  for (int64_t i = 0; i < n_steps; ++i) {
    run_step(state, ctx);
    if (options.on_snapshot) options.on_snapshot(state);
  }

  RunResult result;
  result.report = finalize_report(state.metrics, state.event_hash);
  result.event_log = std::move(state.event_log);
  return result;
}

void write_event_log_csv(const std::vector<Event>& events, double dt_s, std::ostream& out) {
  out << "time,event,user,cell_from,cell_to\n";
  for (const auto& e : events) {
    out << format_double(e.step * dt_s) << ',' << event_name(e.type) << ',' << e.user << ','
        << e.cell_from << ',' << e.cell_to << "\n";
  }
}

}  // namespace hosim
