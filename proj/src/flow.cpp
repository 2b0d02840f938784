#include "csf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace csf {

void FlowParams::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("flow." + field + ": " + why);
    };
    if (!(dt_safety > 0.0 && dt_safety <= 0.5)) fail("dt_safety", "must lie in (0, 0.5]");
    if (redistribution_every < 1) fail("redistribution_every", "must be >= 1");
    if (record_every < 1) fail("record_every", "must be >= 1");
    if (!(stop_min_length > 0.0)) fail("stop_min_length", "must be > 0");
    if (!(stop_max_curvature > 0.0)) fail("stop_max_curvature", "must be > 0");
    if (!(stop_max_time > 0.0)) fail("stop_max_time", "must be > 0");
    if (kappa_floor && !(*kappa_floor >= 0.0)) fail("kappa_floor", "must be >= 0");
}

namespace {

double floor_for(const DiscreteCurve& curve, const FlowParams& params) {
    return params.kappa_floor ? *params.kappa_floor : default_kappa_floor(curve);
}

}  // namespace

FlowState FlowState::initial(DiscreteCurve curve, const FlowParams& params, double t0) {
    FrenetData fd = csf::frenet(curve, floor_for(curve, params));
    return FlowState{std::move(curve), t0, 0, std::move(fd)};
}

double stable_dt(const FlowState& state, const FlowParams& params) {
    const double h = min_edge_length(state.curve);
    if (h * h < 1e-24) {
        throw SingularityStop("dt underflow: smallest edge " + std::to_string(h), state);
    }
    return params.dt_safety * h * h;
}

FlowState step(const FlowState& state, const FlowParams& params, double dt) {
    PointMatrix moved = state.curve.points() + dt * state.frenet.curvature_vector;
    const long next_index = state.step_index + 1;
    try {
        DiscreteCurve curve(std::move(moved));
        if (next_index % params.redistribution_every == 0) curve = resample_uniform(curve, curve.size());
        FrenetData fd = csf::frenet(curve, floor_for(curve, params));
        if (!fd.curvature.allFinite()) throw InvalidCurve("non-finite curvature");
        return FlowState{std::move(curve), state.t + dt, next_index, std::move(fd)};
    } catch (const InvalidCurve& e) {
        throw SingularityStop(std::string("step produced an invalid curve: ") + e.what(), state);
    } catch (const DegenerateGeometry& e) {
        throw SingularityStop(std::string("step produced a degenerate curve: ") + e.what(), state);
    }
}

FlowState step(const FlowState& state, const FlowParams& params) {
    double dt = stable_dt(state, params);
    dt = std::min(dt, params.stop_max_time - state.t);
    if (!(dt > 0.0)) throw std::logic_error("step: time horizon already reached");
    return step(state, params, dt);
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::MinLength: return "min_length";
        case StopReason::MaxCurvature: return "max_curvature";
        case StopReason::MaxTime: return "max_time";
        case StopReason::Singularity: return "singularity";
        case StopReason::Error: return "error";
    }
    return "unknown";
}

bool MonitorReport::has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::vector<double> MonitorReport::series(const std::string& name) const {
    std::vector<double> out;
    out.reserve(rows.size());
    const auto it = std::find(columns.begin(), columns.end(), name);
    for (const auto& row : rows) {
        if (name == "step") out.push_back(static_cast<double>(row.step));
        else if (name == "t") out.push_back(row.t);
        else if (name == "length") out.push_back(row.length);
        else if (name == "max_kappa") out.push_back(row.max_kappa);
        else if (name == "min_edge") out.push_back(row.min_edge);
        else if (it != columns.end()) out.push_back(row.values[static_cast<std::size_t>(it - columns.begin())]);
        else throw std::out_of_range("no column '" + name + "' in report");
    }
    return out;
}

std::optional<double> MonitorReport::first_time(const std::string& name, const std::function<bool(double)>& pred) const {
    const auto values = series(name);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (pred(values[i])) return rows[i].t;
    }
    return std::nullopt;
}

void MonitorReport::write_csv(std::ostream& out) const {
    out << "step,t,length,max_kappa,min_edge";
    for (const auto& c : columns) out << ',' << c;
    out << '\n';
    const auto old_precision = out.precision(17);
    for (const auto& row : rows) {
        out << row.step << ',' << row.t << ',' << row.length << ',' << row.max_kappa << ',' << row.min_edge;
        for (double v : row.values) {
            out << ',';
            if (!std::isnan(v)) out << v;
        }
        out << '\n';
    }
    out.precision(old_precision);
}

namespace {

MonitorReport::Row base_row(const FlowState& s) {
    return {s.step_index, s.t, s.frenet.total_length, s.frenet.max_curvature(), min_edge_length(s.curve), {}};
}

std::vector<std::string> collect_columns(const std::vector<MonitorPtr>& monitors,
                                         const std::vector<FamilyMonitorPtr>& family_monitors) {
    std::vector<std::string> cols;
    for (const auto& m : monitors) {
        for (auto& c : m->columns()) cols.push_back(std::move(c));
    }
    for (const auto& m : family_monitors) {
        for (auto& c : m->columns()) cols.push_back(std::move(c));
    }
    return cols;
}

std::optional<StopReason> stop_criterion(const FlowState& s, const FlowParams& params) {
    if (s.frenet.total_length < params.stop_min_length) return StopReason::MinLength;
    if (s.frenet.max_curvature() > params.stop_max_curvature) return StopReason::MaxCurvature;
    if (s.t >= params.stop_max_time) return StopReason::MaxTime;
    return std::nullopt;
}

using FamilyHook = std::function<void(std::span<const FlowState>)>;

std::vector<RunResult> run_family(std::vector<DiscreteCurve> curves0, const FlowParams& params,
                                  const std::vector<MonitorPtr>& monitors,
                                  const std::vector<FamilyMonitorPtr>& family_monitors, const FamilyHook& on_record) {
    params.validate();
    if (curves0.empty()) throw std::invalid_argument("evolve_family: empty family");

    std::vector<FlowState> states;
    states.reserve(curves0.size());
    for (auto& c : curves0) states.push_back(FlowState::initial(std::move(c), params));

    const auto columns = collect_columns(monitors, family_monitors);
    std::vector<MonitorReport> reports(states.size());
    for (auto& r : reports) r.columns = columns;

    auto record = [&]() {
        std::vector<double> family_values;
        for (const auto& m : family_monitors) {
            const auto v = m->sample(states);
            family_values.insert(family_values.end(), v.begin(), v.end());
        }
        for (std::size_t k = 0; k < states.size(); ++k) {
            auto row = base_row(states[k]);
            for (const auto& m : monitors) {
                const auto v = m->sample(states[k]);
                row.values.insert(row.values.end(), v.begin(), v.end());
            }
            row.values.insert(row.values.end(), family_values.begin(), family_values.end());
            reports[k].rows.push_back(std::move(row));
        }
        if (on_record) on_record(states);
    };

    auto finish = [&](StopReason reason, const std::string& message) {
        if (reports.front().rows.empty() || reports.front().rows.back().step != states.front().step_index) record();
        std::vector<RunResult> out;
        out.reserve(states.size());
        for (std::size_t k = 0; k < states.size(); ++k) {
            reports[k].reason = reason;
            reports[k].final_t = states[k].t;
            reports[k].final_step = states[k].step_index;
            reports[k].message = message;
            out.push_back({std::move(states[k]), std::move(reports[k])});
        }
        return out;
    };

    record();
    while (true) {
        for (const auto& s : states) {
            if (const auto reason = stop_criterion(s, params)) return finish(*reason, "");
        }
        try {
            double dt = std::numeric_limits<double>::infinity();
            for (const auto& s : states) dt = std::min(dt, stable_dt(s, params));
            dt = std::min(dt, params.stop_max_time - states.front().t);
            std::vector<FlowState> next;
            next.reserve(states.size());
            for (const auto& s : states) next.push_back(step(s, params, dt));
            states = std::move(next);
        } catch (const SingularityStop& e) {
            return finish(StopReason::Singularity, e.what());
        } catch (const std::exception& e) {
            return finish(StopReason::Error, e.what());
        }
        if (states.front().step_index % params.record_every == 0) record();
    }
}

}  // namespace

RunResult evolve(DiscreteCurve curve0, const FlowParams& params, const std::vector<MonitorPtr>& monitors,
                 const RecordHook& on_record) {
    std::vector<DiscreteCurve> family;
    family.push_back(std::move(curve0));
    FamilyHook hook;
    if (on_record) hook = [&](std::span<const FlowState> s) { on_record(s.front()); };
    auto results = run_family(std::move(family), params, monitors, {}, hook);
    return std::move(results.front());
}

std::vector<RunResult> evolve_family(std::vector<DiscreteCurve> curves0, const FlowParams& params,
                                     const std::vector<MonitorPtr>& monitors,
                                     const std::vector<FamilyMonitorPtr>& family_monitors) {
    return run_family(std::move(curves0), params, monitors, family_monitors, {});
}

}  // namespace csf
