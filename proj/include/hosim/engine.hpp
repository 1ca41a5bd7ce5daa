#ifndef HOSIM_ENGINE_HPP
#define HOSIM_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hosim/metrics.hpp"
#include "hosim/mobility.hpp"
#include "hosim/radio.hpp"
#include "hosim/rng.hpp"
#include "hosim/scenario.hpp"

namespace hosim {

// A snapshot-level consistency invariant was violated.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Policy { kFixedMargin, kAutoTuned };

std::string policy_name(Policy policy);

struct UserSession {
  int64_t id = 0;
  Point position;
  Vec2 velocity;  // m/s; heading perturbed each step, speed constant
  int serving_cell = -1;
  int allocated_prbs = 0;
  double remaining_bytes = 0.0;
  double admitted_at = 0.0;
  bool counted = false;             // admitted after warm-up (metrics cohort)
  std::vector<double> shadow_db;    // persistent per-site shadowing
  Rng mobility_rng;
  double last_sinr_db = 0.0;
  std::vector<double> rx_dbm;       // per-site received power at the current position
};

enum class EventType : int {
  kAdmit = 0,
  kBlockCoverage = 1,
  kBlockResource = 2,
  kHandover = 3,
  kComplete = 4,
  kDrop = 5,
};

const char* event_name(EventType t);

struct Event {
  int64_t step = 0;
  EventType type = EventType::kAdmit;
  int64_t user = 0;
  int cell_from = -1;
  int cell_to = -1;
};

// Whole-run counters behind the conservation invariant
//   attempts = active + completed + blocked + dropped.
struct Counters {
  int64_t attempts = 0;
  int64_t admitted = 0;
  int64_t blocked_coverage = 0;
  int64_t blocked_resource = 0;
  int64_t dropped = 0;
  int64_t completed = 0;
};

struct SimulationState {
  double clock_s = 0.0;
  int64_t step_index = 0;
  int64_t next_user_id = 0;
  std::vector<UserSession> sessions;  // ascending id
  std::vector<int> occupied_prbs;     // per cell
  LoadVector loads;                   // smoothed
  HandoverMarginMatrix hm;
  Rng arrivals_rng;
  Rng placement_rng;
  Counters totals;
  MetricsAccumulator metrics;
  uint64_t event_hash = 0;
  std::vector<Event> event_log;       // filled only when requested
};

struct RunOptions {
  std::optional<uint64_t> seed_override;
  bool keep_event_log = false;
  std::ostream* hm_dump = nullptr;    // per-snapshot margin rows "time,e,k,margin_db"
  std::function<void(const SimulationState&)> on_snapshot;
};

struct RunResult {
  MetricsReport report;
  std::vector<Event> event_log;
};

// Fresh state for a run: empty network, zero loads, margins at f0, streams
// derived from the seed.
SimulationState make_initial_state(const Scenario& scenario, Policy policy, uint64_t seed);

// One snapshot, in fixed phase order: clock, moves, arrivals+CAC, handovers,
// PRB reallocation, SINR/throughput drain, completions and drops, load
// smoothing, margin update, metrics. Invariants are checked at the end of
// every step; a breach throws ConsistencyError.
void step(SimulationState& state, const Scenario& scenario, Policy policy);

// Iterates step over sim_duration; metrics cover the post-warm-up window.
// Deterministic for a fixed (scenario, seed, policy).
RunResult run(const Scenario& scenario, Policy policy, const RunOptions& options = {});

// Random-walk move: Gaussian heading perturbation, constant speed,
// reflection at the bounding box.
void move_user(UserSession& user, double dt_s, const Rect& bounds);

void write_event_log_csv(const std::vector<Event>& events, double dt_s, std::ostream& out);

}  // namespace hosim

#endif
