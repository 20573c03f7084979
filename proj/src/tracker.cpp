#include "rfstrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rfstrack {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxNodesPerComponent = 1u << 20;

double log_or_neg_inf(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

void remove_coordinate(Eigen::VectorXd& v, int idx) {
  const Eigen::Index n = v.size();
  for (Eigen::Index i = idx; i + 1 < n; ++i) v(i) = v(i + 1);
  v.conservativeResize(n - 1);
}

void remove_row_col(Eigen::MatrixXd& m, int idx) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = idx; i + 1 < n; ++i) m.row(i) = m.row(i + 1);
  m.conservativeResize(n - 1, Eigen::NoChange);
  for (Eigen::Index j = idx; j + 1 < n; ++j) m.col(j) = m.col(j + 1);
  m.conservativeResize(Eigen::NoChange, n - 1);
}

}  // namespace

int Belief::awake_count() const {
  int c = 0;
  for (const auto& r : registry)
    if (r.status != JammerStatus::dormant) ++c;
  return c;
}

std::vector<int> Belief::bias_slots() const {
  std::vector<int> slots;
  for (const auto& r : registry)
    if (r.status != JammerStatus::dormant) slots.push_back(r.state_slot);
  return slots;
}

Lineage make_lineage(int parent_index, int target_meas) {
  return (static_cast<Lineage>(parent_index) << 24) |
         static_cast<Lineage>(target_meas + 1);
}

int lineage_parent(Lineage l) { return static_cast<int>(l >> 24); }

int lineage_target(Lineage l) { return static_cast<int>(l & 0xFFFFFF) - 1; }

Belief predict(const Belief& belief, const MotionModel& motion) {
  if (belief.mixture.dim != motion.dim())
    throw std::invalid_argument("predict: motion model dimension mismatch");
  Belief out = belief;
  for (auto& c : out.mixture.components) {
    c.mean = motion.F * c.mean;
    c.cov = symmetrize(motion.F * c.cov * motion.F.transpose() + motion.Q);
  }
  return out;
}

namespace {

// Partial hypothesis while expanding the per-measurement assignment product.
struct Node {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double logw;
};

}  // namespace

Belief update(const Belief& predicted, const std::vector<Eigen::VectorXd>& scan,
              const MeasurementModel& meas, const ClutterModel& clutter,
              const JammerObsBuilder& jammer_obs, const UpdateParams& params) {
  if (predicted.mixture.empty())
    throw std::invalid_argument("update: empty predicted mixture");

  const int n = static_cast<int>(scan.size());
  if (n == 0) {
    // All hypotheses are misdetections with identical factors: the posterior
    // is the predicted mixture itself.
    Belief out = predicted;
    out.timestep = predicted.timestep + 1;
    return out;
  }

  const int c_total = clutter.jammer_component_count();
  const double log_lambda0 = log_or_neg_inf(clutter.lambda0_bar);
  std::vector<double> log_lambda_jam(static_cast<std::size_t>(c_total));
  for (int i = 0; i < c_total; ++i)
    log_lambda_jam[static_cast<std::size_t>(i)] =
        log_or_neg_inf(clutter.lambda_jam[static_cast<std::size_t>(i)]);
  const double log_pd = log_or_neg_inf(params.p_d);
  const double log_qd = log_or_neg_inf(1.0 - params.p_d);

  // lambda_0 * u(z_j): shared by every predicted component.
  std::vector<double> log_uniform(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Eigen::Vector2d p2;
    const bool planar = scan[static_cast<std::size_t>(j)].size() == 2;
    if (planar) p2 = scan[static_cast<std::size_t>(j)].head<2>();
    const bool inside = !planar || clutter.fov.contains(p2);
    log_uniform[static_cast<std::size_t>(j)] =
        inside ? log_lambda0 + std::log(clutter.uniform_density()) : kNegInf;
  }

  std::vector<GaussianComponent> raw;
  std::vector<double> raw_logw;

  for (std::size_t pm = 0; pm < predicted.mixture.size(); ++pm) {
    const GaussianComponent& parent = predicted.mixture.components[pm];
    const double log_w_pred = log_or_neg_inf(parent.weight);

    std::vector<JammerObservation> jam(static_cast<std::size_t>(c_total));
    for (int i = 1; i <= c_total; ++i)
      jam[static_cast<std::size_t>(i - 1)] = jammer_obs(parent.mean, i, c_total);

    // Predicted-marginal screening: per measurement, the log factor of every
    // clutter explanation and of the target-detection explanation.
    Eigen::MatrixXd clutter_log(n, 1 + c_total);
    Eigen::VectorXd target_log(n);
    {
      const Eigen::MatrixXd s_target = symmetrize(
          meas.H * parent.cov * meas.H.transpose() + meas.R);
      const Eigen::VectorXd z_target = meas.H * parent.mean;
      std::vector<Eigen::VectorXd> z_jam(static_cast<std::size_t>(c_total));
      std::vector<Eigen::MatrixXd> s_jam(static_cast<std::size_t>(c_total));
      for (int i = 0; i < c_total; ++i) {
        const auto& jo = jam[static_cast<std::size_t>(i)];
        z_jam[static_cast<std::size_t>(i)] = jo.obs * parent.mean + jo.offset;
        s_jam[static_cast<std::size_t>(i)] =
            symmetrize(jo.obs * parent.cov * jo.obs.transpose() + jo.noise);
      }
      for (int j = 0; j < n; ++j) {
        const auto& z = scan[static_cast<std::size_t>(j)];
        clutter_log(j, 0) = log_uniform[static_cast<std::size_t>(j)];
        for (int i = 0; i < c_total; ++i)
          clutter_log(j, 1 + i) =
              log_lambda_jam[static_cast<std::size_t>(i)] +
              gaussian_logpdf(z, z_jam[static_cast<std::size_t>(i)],
                              s_jam[static_cast<std::size_t>(i)]);
        target_log(j) = gaussian_logpdf(z, z_target, s_target);
      }
    }

    // Which jammer assignments are worth expanding for each measurement.
    std::vector<std::vector<int>> kept_jam(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double best = clutter_log.row(j).maxCoeff();
      for (int i = 1; i <= c_total; ++i)
        if (clutter_log(j, i) >= best + params.branch_log_eps &&
            clutter_log(j, i) > kNegInf)
          kept_jam[static_cast<std::size_t>(j)].push_back(i);
    }

    // Which target options (misdetection = -1, or measurement j) to expand.
    // Score differences are taken against the best clutter explanation the
    // chosen measurement would otherwise have.
    std::vector<int> target_options;
    {
      std::vector<double> scores;
      std::vector<int> opts;
      opts.push_back(-1);
      scores.push_back(log_qd);
      for (int j = 0; j < n; ++j) {
        opts.push_back(j);
        scores.push_back(log_pd + target_log(j) - clutter_log.row(j).maxCoeff());
      }
      const double best = *std::max_element(scores.begin(), scores.end());
      for (std::size_t i = 0; i < opts.size(); ++i)
        if (scores[i] >= best + params.branch_log_eps && scores[i] > kNegInf)
          target_options.push_back(opts[i]);
    }

    // Uniform-only measurements multiply every hypothesis by the same scalar;
    // only measurements with a surviving jammer branch split nodes. Branching
    // measurements are visited in a canonical coordinate order so the result
    // does not depend on scan ordering even when flooring engages.
    double uniform_only_sum = 0.0;
    std::vector<int> branching;
    for (int j = 0; j < n; ++j) {
      if (kept_jam[static_cast<std::size_t>(j)].empty())
        uniform_only_sum += log_uniform[static_cast<std::size_t>(j)];
      else
        branching.push_back(j);
    }
    std::sort(branching.begin(), branching.end(), [&](int a, int b) {
      const auto& za = scan[static_cast<std::size_t>(a)];
      const auto& zb = scan[static_cast<std::size_t>(b)];
      for (Eigen::Index i = 0; i < za.size(); ++i)
        if (za(i) != zb(i)) return za(i) < zb(i);
      return a < b;
    });

    for (int t : target_options) {
      std::vector<Node> nodes;
      double base = log_w_pred + uniform_only_sum;
      if (t >= 0 && kept_jam[static_cast<std::size_t>(t)].empty())
        base -= log_uniform[static_cast<std::size_t>(t)];
      if (t < 0) {
        nodes.push_back({parent.mean, parent.cov, base + log_qd});
      } else {
        auto upd = linear_gaussian_update(parent, meas.H,
                                          Eigen::VectorXd::Zero(meas.H.rows()),
                                          meas.R, scan[static_cast<std::size_t>(t)]);
        nodes.push_back({std::move(upd.posterior.mean), std::move(upd.posterior.cov),
                         base + log_pd + upd.marginal_loglik});
      }

      for (int j : branching) {
        if (j == t) continue;
        const auto& z = scan[static_cast<std::size_t>(j)];
        const auto& branches = kept_jam[static_cast<std::size_t>(j)];
        std::vector<Node> next;
        next.reserve(nodes.size() * (1 + branches.size()));
        for (const Node& node : nodes) {
          // Uniform-clutter branch keeps the Gaussian untouched.
          next.push_back({node.mean, node.cov,
                          node.logw + log_uniform[static_cast<std::size_t>(j)]});
          for (int i : branches) {
            const auto& jo = jam[static_cast<std::size_t>(i - 1)];
            GaussianComponent g{1.0, node.mean, node.cov, 0};
            auto upd = linear_gaussian_update(g, jo.obs, jo.offset, jo.noise, z);
            next.push_back({std::move(upd.posterior.mean),
                            std::move(upd.posterior.cov),
                            node.logw + log_lambda_jam[static_cast<std::size_t>(i - 1)] +
                                upd.marginal_loglik});
          }
        }
        nodes = std::move(next);

        if (nodes.size() > static_cast<std::size_t>(params.expansion_node_limit)) {
          double best = kNegInf;
          for (const Node& node : nodes) best = std::max(best, node.logw);
          const double floor = best + params.node_log_floor;
          std::erase_if(nodes, [&](const Node& node) { return node.logw < floor; });
          if (nodes.size() > static_cast<std::size_t>(params.expansion_node_limit)) {
            std::stable_sort(nodes.begin(), nodes.end(),
                             [](const Node& a, const Node& b) { return a.logw > b.logw; });
            nodes.resize(static_cast<std::size_t>(params.expansion_node_limit));
          }
        }
        if (nodes.size() > kMaxNodesPerComponent)
          throw std::runtime_error("update: hypothesis expansion exceeds limit");
      }

      const Lineage lin = make_lineage(static_cast<int>(pm), t);
      for (Node& node : nodes) {
        raw.push_back({0.0, std::move(node.mean), std::move(node.cov), lin});
        raw_logw.push_back(node.logw);
      }
    }
  }

  const std::vector<double> weights = normalize_log_weights(raw_logw);
  Mixture mix;
  mix.dim = predicted.mixture.dim;
  mix.components = std::move(raw);
  for (std::size_t i = 0; i < weights.size(); ++i) mix.components[i].weight = weights[i];

  mix = gate_negative_bias(std::move(mix), predicted.bias_slots());
  mix = reduce_mixture(std::move(mix), params.prune_threshold, params.cap);

  Belief out;
  out.mixture = std::move(mix);
  out.registry = predicted.registry;
  out.base_dim = predicted.base_dim;
  out.timestep = predicted.timestep + 1;
  return out;
}

double detect_jamming(const Belief& posterior,
                      const std::vector<Eigen::VectorXd>& scan,
                      const Belief& predicted, const ClutterModel& clutter,
                      const JammerObsBuilder& jammer_obs) {
  const int n = static_cast<int>(scan.size());
  const int c_total = clutter.jammer_component_count();
  if (n == 0 || c_total == 0) return 0.0;
  const Eigen::VectorXd w = clutter_mixture_weights(clutter);
  if (w.tail(c_total).maxCoeff() <= 0.0) return 0.0;

  const double u = clutter.uniform_density();

  // P(s_j in W) per (parent predicted component, measurement), lazily filled.
  const std::size_t m_pred = predicted.mixture.size();
  std::vector<std::vector<double>> false_alarm_prob(m_pred);

  auto factors_for_parent = [&](std::size_t pm) -> const std::vector<double>& {
    auto& row = false_alarm_prob[pm];
    if (!row.empty()) return row;
    const GaussianComponent& parent = predicted.mixture.components[pm];
    row.resize(static_cast<std::size_t>(n));
    std::vector<Eigen::VectorXd> z_jam(static_cast<std::size_t>(c_total));
    std::vector<Eigen::MatrixXd> s_jam(static_cast<std::size_t>(c_total));
    for (int i = 1; i <= c_total; ++i) {
      const JammerObservation jo = jammer_obs(parent.mean, i, c_total);
      z_jam[static_cast<std::size_t>(i - 1)] = jo.obs * parent.mean + jo.offset;
      s_jam[static_cast<std::size_t>(i - 1)] =
          symmetrize(jo.obs * parent.cov * jo.obs.transpose() + jo.noise);
    }
    for (int j = 0; j < n; ++j) {
      const auto& z = scan[static_cast<std::size_t>(j)];
      const double numer = w(0) * u;
      double denom = numer;
      for (int i = 0; i < c_total; ++i)
        denom += w(1 + i) * std::exp(gaussian_logpdf(
                                z, z_jam[static_cast<std::size_t>(i)],
                                s_jam[static_cast<std::size_t>(i)]));
      row[static_cast<std::size_t>(j)] = denom > 0.0 ? numer / denom : 0.0;
    }
    return row;
  };

  double p_jam = 0.0;
  for (const auto& comp : posterior.mixture.components) {
    const int pm = lineage_parent(comp.lineage);
    const int t = lineage_target(comp.lineage);
    if (pm < 0 || static_cast<std::size_t>(pm) >= m_pred)
      throw std::invalid_argument("detect_jamming: posterior lineage does not match predicted mixture");
    const auto& factors = factors_for_parent(static_cast<std::size_t>(pm));
    double prod = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == t) continue;
      prod *= factors[static_cast<std::size_t>(j)];
    }
    p_jam += comp.weight * (1.0 - prod);
  }
  return std::clamp(p_jam, 0.0, 1.0);
}

Belief augment_bias(const Belief& belief, double prior_mean, double prior_var) {
  Belief out = belief;
  const int d = out.mixture.dim;
  for (auto& c : out.mixture.components) {
    c.mean.conservativeResize(d + 1);
    c.mean(d) = prior_mean;
    c.cov.conservativeResize(d + 1, d + 1);
    c.cov.row(d).setZero();
    c.cov.col(d).setZero();
    c.cov(d, d) = prior_var;
  }
  out.mixture.dim = d + 1;
  JammerComponentRecord rec;
  rec.status = JammerStatus::vigilant;
  rec.state_slot = d;
  out.registry.push_back(rec);
  return out;
}

Belief remove_bias(const Belief& belief, int slot) {
  Belief out = belief;
  auto it = std::find_if(out.registry.begin(), out.registry.end(),
                         [&](const JammerComponentRecord& r) {
                           return r.status != JammerStatus::dormant &&
                                  r.state_slot == slot;
                         });
  if (it == out.registry.end())
    throw std::invalid_argument("remove_bias: slot is not an awake bias coordinate");

  for (auto& c : out.mixture.components) {
    remove_coordinate(c.mean, slot);
    remove_row_col(c.cov, slot);
  }
  out.mixture.dim -= 1;
  it->status = JammerStatus::dormant;
  it->state_slot = -1;
  it->below_timer = 0;
  it->above_timer = 0;
  for (auto& r : out.registry)
    if (r.status != JammerStatus::dormant && r.state_slot > slot) r.state_slot -= 1;
  return out;
}

namespace {

// Reset the bias marginal at `slot`: zero cross-covariance, prior variance.
void restart_bias_marginal(Belief& belief, int slot, const BiasPrior& prior) {
  for (auto& c : belief.mixture.components) {
    c.mean(slot) = prior.mean;
    c.cov.row(slot).setZero();
    c.cov.col(slot).setZero();
    c.cov(slot, slot) = prior.var;
  }
}

}  // namespace

Belief manage_lifecycle(Belief belief, const LifecycleConfig& cfg, double delta,
                        const BiasPrior& prior) {
  if (belief.registry.empty()) return belief;
  if (delta <= 0.0) throw std::invalid_argument("manage_lifecycle: delta must be > 0");

  const int steps_act = std::max(1, static_cast<int>(std::lround(cfg.t_act_s / delta)));
  const int steps_dorm = std::max(1, static_cast<int>(std::lround(cfg.t_dorm_s / delta)));

  const Moments mom = mixture_moments(belief.mixture);

  std::vector<std::size_t> to_activate;
  std::vector<int> dormant_slots;
  std::vector<int> restart_slots;

  for (std::size_t i = 0; i < belief.registry.size(); ++i) {
    auto& rec = belief.registry[i];
    if (rec.status == JammerStatus::dormant) continue;
    const double bias_std = std::sqrt(std::max(0.0, mom.cov(rec.state_slot, rec.state_slot)));

    rec.below_timer = bias_std < cfg.u_act_m ? rec.below_timer + 1 : 0;
    rec.above_timer = bias_std > cfg.u_dorm_m ? rec.above_timer + 1 : 0;

    if (!cfg.single_component && rec.status == JammerStatus::vigilant &&
        rec.below_timer >= steps_act) {
      to_activate.push_back(i);
      continue;
    }
    if (rec.above_timer >= steps_dorm) {
      if (!cfg.single_component && rec.status == JammerStatus::active)
        dormant_slots.push_back(rec.state_slot);
      else
        restart_slots.push_back(rec.state_slot);  // the watcher never dies
      rec.above_timer = 0;
    }
  }

  std::sort(dormant_slots.rbegin(), dormant_slots.rend());
  for (int slot : dormant_slots) {
    for (int& rs : restart_slots)
      if (rs > slot) rs -= 1;
    belief = remove_bias(belief, slot);
  }

  for (int slot : restart_slots) restart_bias_marginal(belief, slot, prior);

  for (std::size_t i : to_activate) {
    belief.registry[i].status = JammerStatus::active;
    belief.registry[i].below_timer = 0;
    belief.registry[i].above_timer = 0;
    belief = augment_bias(belief, prior.mean, prior.var);
  }
  return belief;
}

StateEstimate estimate_state(const Belief& belief) {
  if (belief.base_dim != 4)
    throw std::invalid_argument("estimate_state: expects a radar belief (base_dim 4)");
  const Moments mom = mixture_moments(belief.mixture);
  StateEstimate est;
  est.position = mom.mean.head<2>();
  est.velocity = mom.mean.segment<2>(2);
  for (int slot : belief.bias_slots()) est.biases.push_back(mom.mean(slot));
  return est;
}

// ---------------------------------------------------------------------------
// RfsTracker
// ---------------------------------------------------------------------------

RfsTracker::RfsTracker(const TrackerSetup& setup) : setup_(setup) {
  GaussianComponent prior;
  prior.weight = 1.0;
  prior.mean = setup.prot.prior_mean;
  prior.cov = setup.prot.prior_var.asDiagonal();
  belief_.mixture.dim = 4;
  belief_.mixture.components.push_back(std::move(prior));
  belief_.base_dim = 4;
  if (setup.kind == TrackerKind::adaptive)
    belief_ = augment_bias(belief_, setup.prot.bias_prior.mean,
                           setup.prot.bias_prior.var);
}

ClutterModel RfsTracker::assumed_clutter(int c_total) const {
  ClutterModel cm;
  cm.lambda0_bar = setup_.lambda0_bar;
  cm.fov = setup_.fov;
  if (setup_.kind != TrackerKind::naive)
    cm.lambda_jam.assign(static_cast<std::size_t>(c_total), setup_.prot.lambda_jam);
  return cm;
}

JammerObsBuilder RfsTracker::obs_builder(const MeasurementModel& meas) const {
  const Eigen::Vector2d radar = setup_.radar_position;
  if (setup_.kind == TrackerKind::adaptive) {
    return [meas, radar](const Eigen::VectorXd& pred_mean, int i, int c_total) {
      const Eigen::Vector2d los = los_unit_vector(pred_mean.head<2>(), radar);
      return build_jammer_obs_adaptive(los, i, c_total, meas);
    };
  }
  if (setup_.kind == TrackerKind::nonadaptive) {
    const double b_na = setup_.prot.b_na;
    const Eigen::Vector2d eig = setup_.prot.na_eigvals;
    return [b_na, eig, radar](const Eigen::VectorXd& pred_mean, int, int) {
      const Eigen::Vector2d los = los_unit_vector(pred_mean.head<2>(), radar);
      return build_jammer_obs_nonadaptive(los, b_na, eig);
    };
  }
  return nullptr;
}

TrackerStep RfsTracker::step(const std::vector<Eigen::Vector2d>& scan) {
  const bool adaptive = setup_.kind == TrackerKind::adaptive;
  const int n_bias = adaptive ? belief_.awake_count() : 0;
  const int c_total = adaptive ? n_bias : (setup_.kind == TrackerKind::nonadaptive ? 1 : 0);

  const MotionModel motion =
      build_cv_model(setup_.delta, setup_.sigma_q, setup_.prot.alpha, n_bias);
  const MeasurementModel meas =
      build_position_measurement(4 + n_bias, setup_.sigma_r);
  const ClutterModel clutter = assumed_clutter(c_total);
  const JammerObsBuilder builder = obs_builder(meas);

  std::vector<Eigen::VectorXd> points;
  points.reserve(scan.size());
  for (const auto& z : scan) points.emplace_back(z);

  const Belief predicted = predict(belief_, motion);

  UpdateParams up;
  up.p_d = setup_.p_d;
  up.prune_threshold = setup_.prot.prune_threshold;
  up.cap = setup_.prot.cap;
  up.branch_log_eps = setup_.prot.branch_log_eps;

  Belief posterior = update(predicted, points, meas, clutter, builder, up);

  TrackerStep out;
  out.p_jam = detect_jamming(posterior, points, predicted, clutter, builder);

  const Moments mom = mixture_moments(posterior.mixture);
  out.position = mom.mean.head<2>();
  out.velocity = mom.mean.segment<2>(2);
  const std::vector<int> slots = posterior.bias_slots();
  if (!slots.empty()) {
    out.bias_mean = mom.mean(slots.front());
    out.bias_std = std::sqrt(std::max(0.0, mom.cov(slots.front(), slots.front())));
  }
  out.n_components = static_cast<int>(posterior.mixture.size());

  if (adaptive)
    posterior = manage_lifecycle(std::move(posterior), setup_.prot.lifecycle,
                                 setup_.delta, setup_.prot.bias_prior);
  out.c_awake = posterior.awake_count();

  belief_ = std::move(posterior);
  return out;
}

}  // namespace rfstrack
