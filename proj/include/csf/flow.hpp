#pragma once

#include "csf/curve.hpp"
#include "csf/geometry.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace csf {

struct FlowParams {
    double dt_safety = 0.4;            // dt = dt_safety * h_min^2, in (0, 0.5]
    int redistribution_every = 5;
    double stop_min_length = 1e-3;
    double stop_max_curvature = 1e4;   // empirical stand-in for the curvature bound
    double stop_max_time = 1.0;
    std::optional<double> kappa_floor; // default: 1e-8 / curve scale
    int record_every = 10;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct FlowState {
    DiscreteCurve curve;
    double t = 0.0;
    long step_index = 0;
    FrenetData frenet;

    static FlowState initial(DiscreteCurve curve, const FlowParams& params, double t0 = 0.0);
};

/// The step size could not be made positive: the curve is collapsing or a
/// vertex pair merged. Carries the last valid state.
class SingularityStop : public std::runtime_error {
  public:
    SingularityStop(const std::string& what, FlowState last) : std::runtime_error(what), last_(std::move(last)) {}
    const FlowState& last_valid() const noexcept { return last_; }

  private:
    FlowState last_;
};

/// dt_safety * h_min^2 for the current curve. Throws SingularityStop when
/// h_min^2 < 1e-24.
double stable_dt(const FlowState& state, const FlowParams& params);

/// Forward Euler X <- X + dt * d^2X/ds^2, then uniform redistribution when
/// the new step index is a multiple of redistribution_every.
FlowState step(const FlowState& state, const FlowParams& params, double dt);

/// One step with dt = stable_dt, clipped so that t never passes stop_max_time.
FlowState step(const FlowState& state, const FlowParams& params);

enum class StopReason { MinLength, MaxCurvature, MaxTime, Singularity, Error };

std::string to_string(StopReason reason);

/// A sampled quantity recorded alongside the flow. Implementations are
/// stateless with respect to sampling so one instance can observe several
/// curves. A NaN value marks an absent sample.
class Monitor {
  public:
    virtual ~Monitor() = default;
    virtual std::vector<std::string> columns() const = 0;
    virtual std::vector<double> sample(const FlowState& state) const = 0;
};

/// Observes a synchronized family of curves.
class FamilyMonitor {
  public:
    virtual ~FamilyMonitor() = default;
    virtual std::vector<std::string> columns() const = 0;
    virtual std::vector<double> sample(std::span<const FlowState> family) const = 0;
};

using MonitorPtr = std::shared_ptr<const Monitor>;
using FamilyMonitorPtr = std::shared_ptr<const FamilyMonitor>;

/// Time series of the base metrics and all monitor columns, plus the
/// criterion that ended the run.
struct MonitorReport {
    struct Row {
        long step = 0;
        double t = 0.0;
        double length = 0.0;
        double max_kappa = 0.0;
        double min_edge = 0.0;
        std::vector<double> values;
    };

    std::vector<std::string> columns;  // monitor columns, after the base ones
    std::vector<Row> rows;
    StopReason reason = StopReason::MaxTime;
    double final_t = 0.0;
    long final_step = 0;
    std::string message;

    bool has_column(const std::string& name) const;
    /// Series for a base metric or a monitor column.
    std::vector<double> series(const std::string& name) const;
    /// Time of the first recorded row where `pred` holds for the column, if any.
    std::optional<double> first_time(const std::string& name, const std::function<bool(double)>& pred) const;

    /// CSV with header step,t,length,max_kappa,min_edge,<columns...>.
    void write_csv(std::ostream& out) const;
};

struct RunResult {
    FlowState state;
    MonitorReport report;
};

/// Called after every recorded row with the state that was recorded.
using RecordHook = std::function<void(const FlowState&)>;

RunResult evolve(DiscreteCurve curve0, const FlowParams& params, const std::vector<MonitorPtr>& monitors,
                 const RecordHook& on_record = {});

/// Evolves every member with the common step min_k dt_k. Any member reaching
/// a stop criterion halts the family. Family monitor columns are appended to
/// every member's report.
std::vector<RunResult> evolve_family(std::vector<DiscreteCurve> curves0, const FlowParams& params,
                                     const std::vector<MonitorPtr>& monitors,
                                     const std::vector<FamilyMonitorPtr>& family_monitors = {});

}  // namespace csf
