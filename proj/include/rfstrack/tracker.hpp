#pragma once

#include "rfstrack/gaussmix.hpp"
#include "rfstrack/models.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace rfstrack {

enum class JammerStatus { vigilant, active, dormant };

/// Bookkeeping for one jammer clutter component of the adaptive tracker.
/// Awake entries (vigilant or active) own one bias coordinate of the state.
struct JammerComponentRecord {
  JammerStatus status = JammerStatus::vigilant;
  int below_timer = 0;   // consecutive steps with bias std < U_act
  int above_timer = 0;   // consecutive steps with bias std > U_dorm
  int state_slot = -1;   // bias coordinate; -1 once dormant
};

/// Posterior over the (possibly bias-augmented) state plus the registry of
/// jammer components. State layout: [px, py, vx, vy, b_1..b_C] for radar
/// beliefs (base_dim = 4); tests may use reduced bases.
struct Belief {
  Mixture mixture;
  std::vector<JammerComponentRecord> registry;
  int base_dim = 4;
  int timestep = 0;

  int awake_count() const;
  std::vector<int> bias_slots() const;  // state slots of awake entries, in order
};

/// Builds the observation model of jammer component i (1-based) given the
/// predicted mean of the hypothesis being updated.
using JammerObsBuilder =
    std::function<JammerObservation(const Eigen::VectorXd& pred_mean,
                                    int component_index, int c_total)>;

Lineage make_lineage(int parent_index, int target_meas);  // target_meas -1 = misdetection
int lineage_parent(Lineage l);
int lineage_target(Lineage l);

/// Chapman-Kolmogorov prediction: every component through (F m, F P F^T + Q).
Belief predict(const Belief& belief, const MotionModel& motion);

struct UpdateParams {
  double p_d = 0.98;
  double prune_threshold = 1e-5;
  int cap = 100;
  // Assignment branches whose per-measurement likelihood falls below the best
  // alternative by more than this log margin are not expanded. 0-weight-exact
  // enumeration needs -inf.
  double branch_log_eps = -27.631021115928547;  // ln(1e-12)
  // Partial-hypothesis flooring, engaged only while the expansion of one
  // predicted component holds more than this many nodes (the diffuse filter
  // transient). Nodes this far below the running best are dropped.
  int expansion_node_limit = 512;
  double node_log_floor = -27.631021115928547;  // ln(1e-12)
};

/// One Bayes update of the predicted mixture with an unordered scan.
/// Expands the product of per-measurement clutter densities into explicit
/// assignment hypotheses (uniform clutter or one of the C jammer components,
/// plus the target detection/misdetection choice), each realized as a chain
/// of conjugate Gaussian updates. Applies negative-bias gating, pruning and
/// capping before returning.
Belief update(const Belief& predicted, const std::vector<Eigen::VectorXd>& scan,
              const MeasurementModel& meas, const ClutterModel& clutter,
              const JammerObsBuilder& jammer_obs, const UpdateParams& params);

/// Probability that at least one measurement of the scan is jammer-generated,
/// averaged over posterior hypotheses with their weights. The per-hypothesis
/// value is one minus the product over its secondary measurements of the
/// probability that each is a false alarm under the parent predicted
/// component's clutter density.
double detect_jamming(const Belief& posterior,
                      const std::vector<Eigen::VectorXd>& scan,
                      const Belief& predicted, const ClutterModel& clutter,
                      const JammerObsBuilder& jammer_obs);

/// Append one bias coordinate (prior_mean, prior_var, zero cross-covariance)
/// to every component and register a new vigilant jammer component.
Belief augment_bias(const Belief& belief, double prior_mean, double prior_var);

/// Marginalize out the bias coordinate at `slot`; the owning registry entry
/// goes dormant and higher slots shift down.
Belief remove_bias(const Belief& belief, int slot);

struct LifecycleConfig {
  double u_act_m = 5.0;
  double t_act_s = 7.0;
  double u_dorm_m = 5.0;
  double t_dorm_s = 4.0;
  // Experiment-1 style: one component forever, restart instead of dormancy.
  bool single_component = true;
};

struct BiasPrior {
  double mean = 0.0;
  double var = 500.0;
};

/// Tick the activation/dormancy timers from the moment-matched bias standard
/// deviations and apply status transitions:
///  - vigilant below U_act for T_act: becomes active, a fresh vigilant
///    component is appended (dynamic mode);
///  - active above U_dorm for T_dorm: goes dormant, its slot is removed;
///  - the vigilant watcher (or the lone single-mode component) restarts its
///    bias marginal to the prior instead of going dormant.
Belief manage_lifecycle(Belief belief, const LifecycleConfig& cfg, double delta,
                        const BiasPrior& prior);

struct StateEstimate {
  Eigen::Vector2d position;
  Eigen::Vector2d velocity;
  std::vector<double> biases;  // one per awake component, registry order
};

/// Moment-matched point estimate split by state role (base_dim must be 4).
StateEstimate estimate_state(const Belief& belief);

// ---------------------------------------------------------------------------
// Per-scenario tracker pipeline
// ---------------------------------------------------------------------------

enum class TrackerKind { adaptive, nonadaptive, naive };

/// Tuning shared by the protected trackers.
struct ProtectionParams {
  double prune_threshold = 1e-5;
  int cap = 100;
  double alpha = 10.0;       // bias process-noise scale
  double lambda_jam = 3.0;   // assumed rate per jammer component
  double b_na = 70.0;        // non-adaptive assumed bias, m
  Eigen::Vector2d na_eigvals{500.0, 1.0};
  LifecycleConfig lifecycle{};
  BiasPrior bias_prior{};
  double branch_log_eps = -27.631021115928547;
  Eigen::Vector4d prior_mean{500.0, 500.0, 0.0, 0.0};
  Eigen::Vector4d prior_var{1e4, 1e4, 1e2, 1e2};
};

struct TrackerSetup {
  TrackerKind kind = TrackerKind::adaptive;
  double delta = 0.5;
  double sigma_q = 2.23606797749979;  // sqrt(5)
  double sigma_r = 2.23606797749979;
  double p_d = 0.98;
  double lambda0_bar = 20.0;
  Fov fov{};
  Eigen::Vector2d radar_position{0.0, 0.0};
  ProtectionParams prot{};
};

struct TrackerStep {
  Eigen::Vector2d position{0.0, 0.0};
  Eigen::Vector2d velocity{0.0, 0.0};
  double p_jam = 0.0;
  double bias_mean = 0.0;  // first awake slot, moment matched
  double bias_std = 0.0;
  int c_awake = 0;
  int n_components = 0;
};

/// Runs the predict / update / detect / lifecycle pipeline for one scenario
/// replica. Kind selects the assumed clutter model: adaptive (bias-augmented
/// state, dynamic or single-component), non-adaptive (fixed bias prior along
/// the LOS) or naive (uniform clutter only).
class RfsTracker {
 public:
  explicit RfsTracker(const TrackerSetup& setup);

  TrackerStep step(const std::vector<Eigen::Vector2d>& scan);

  const Belief& belief() const { return belief_; }
  const TrackerSetup& setup() const { return setup_; }

 private:
  ClutterModel assumed_clutter(int c_total) const;
  JammerObsBuilder obs_builder(const MeasurementModel& meas) const;

  TrackerSetup setup_;
  Belief belief_;
};

}  // namespace rfstrack
