/*
   Copyright 2026 The ccpnet Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "ccpnet/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "ccpnet/distributions.hpp"

namespace ccpnet::mc {

SamplingModel sampling_model(const MarketConfig& config, bool antisymmetric) {
    SamplingModel model;
    model.rho = config.rho;
    model.antisymmetric = antisymmetric;
    for (const auto& c : config.classes)
        model.marginals.push_back(c.marginal);
    return model;
}

namespace {

std::uint32_t stream_id(std::size_t n, std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>(i * n + j);
}

// Correlated unit draws for one stream: slot 0 is the common factor, slot
// k + 1 the idiosyncratic shock of class k.
void copula_vector(const SamplingModel& model, const CounterNoise& noise, std::uint64_t path,
                   std::uint32_t stream, std::span<double> out) {
    const double common_w = std::sqrt(model.rho);
    const double own_w = std::sqrt(1.0 - model.rho);
    const double common =
        model.rho > 0.0 ? dist::normal_quantile(noise.uniform(path, stream, 0)) : 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double z = dist::normal_quantile(noise.uniform(path, stream, static_cast<std::uint32_t>(k + 1)));
        const double g = model.rho > 0.0 ? common_w * common + own_w * z : z;
        out[k] = model.marginals[k] == Marginal::StudentT3Unit ? dist::t3_unit_from_normal(g) : g;
    }
}

} // namespace

void sample_pair_exposures(const PairScaleTable& scales, const SamplingModel& model,
                           const CounterNoise& noise, std::uint64_t path, std::size_t i,
                           std::size_t j, ExposureDraw& draw) {
    const std::size_t n = scales.num_dealers();
    const std::size_t k_count = scales.num_classes();
    if (!(i < j && j < n))
        throw std::invalid_argument("sample_pair_exposures: need i < j < N");
    if (!(model.rho >= 0.0 && model.rho < 1.0))
        throw std::invalid_argument("sample_pair_exposures: rho must lie in [0, 1)");
    if (model.marginals.size() != k_count || draw.num_dealers() != n || draw.num_classes() != k_count)
        throw std::invalid_argument("sample_pair_exposures: shape mismatch");

    auto forward = draw.row(i, j);
    auto reverse = draw.row(j, i);
    copula_vector(model, noise, path, stream_id(n, i, j), forward);
    if (model.antisymmetric) {
        for (std::size_t k = 0; k < k_count; ++k)
            reverse[k] = -forward[k];
    } else {
        copula_vector(model, noise, path, stream_id(n, j, i), reverse);
    }
    for (std::size_t k = 0; k < k_count; ++k) {
        forward[k] *= scales(i, j, k);
        reverse[k] *= scales(j, i, k);
    }
}

void sample_draw(const PairScaleTable& scales, const SamplingModel& model, const CounterNoise& noise,
                 std::uint64_t path, ExposureDraw& draw) {
    const std::size_t n = scales.num_dealers();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            sample_pair_exposures(scales, model, noise, path, i, j, draw);
}

CompiledScenario compile(const ClearingScenario& scenario, std::size_t num_classes) {
    if (auto report = validate(scenario, num_classes); !report.ok())
        throw std::invalid_argument(report.summary());
    CompiledScenario out;
    const auto w = scenario.fractions(num_classes);
    out.keep.resize(num_classes);
    for (std::size_t k = 0; k < num_classes; ++k)
        out.keep[k] = 1.0 - w[k];
    for (int id : scenario.ccp_ids()) {
        std::vector<std::pair<std::size_t, double>> group;
        for (const auto& c : scenario.cleared)
            if (c.ccp == id && c.fraction > 0.0)
                group.emplace_back(c.class_index, c.fraction);
        if (!group.empty())
            out.ccps.push_back(std::move(group));
    }
    return out;
}

double evaluate_scenario(const ExposureDraw& draw, const CompiledScenario& scenario, std::size_t i) {
    const std::size_t n = draw.num_dealers();
    const std::size_t k_count = draw.num_classes();
    if (i >= n)
        throw std::out_of_range("evaluate_scenario: dealer index out of range");
    if (scenario.keep.size() != k_count)
        throw std::invalid_argument("evaluate_scenario: scenario compiled for another class count");

    constexpr std::size_t kMaxInline = 16;
    double ccp_inline[kMaxInline] = {};
    std::vector<double> ccp_heap;
    double* ccp = ccp_inline;
    if (scenario.ccps.size() > kMaxInline) {
        ccp_heap.assign(scenario.ccps.size(), 0.0);
        ccp = ccp_heap.data();
    }

    double bilateral = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i)
            continue;
        const auto x = draw.row(i, j);
        double net = 0.0;
        for (std::size_t k = 0; k < k_count; ++k)
            net += scenario.keep[k] * x[k];
        bilateral += std::max(net, 0.0);
        for (std::size_t c = 0; c < scenario.ccps.size(); ++c)
            for (auto [k, w] : scenario.ccps[c])
                ccp[c] += w * x[k];
    }
    double e = bilateral;
    for (std::size_t c = 0; c < scenario.ccps.size(); ++c)
        e += std::max(ccp[c], 0.0);
    return e;
}

double evaluate_scenario(const ExposureDraw& draw, const ClearingScenario& scenario, std::size_t i) {
    return evaluate_scenario(draw, compile(scenario, draw.num_classes()), i);
}

std::string_view to_string(Measure m) {
    switch (m) {
    case Measure::EE:
        return "ee";
    case Measure::VaR:
        return "var";
    case Measure::ES:
        return "es";
    }
    return "?";
}

std::size_t RiskReport::base_index() const {
    for (std::size_t s = 0; s < scenarios.size(); ++s)
        if (scenarios[s].kind == ScenarioKind::NoCCP)
            return s;
    throw std::logic_error("report has no no_ccp base scenario");
}

double RiskReport::value(std::size_t scenario, std::size_t dealer, Measure m) const {
    const auto& cell = scenarios.at(scenario).dealers.at(dealer);
    switch (m) {
    case Measure::EE:
        return cell.ee;
    case Measure::VaR:
        return cell.var;
    case Measure::ES:
        return cell.es;
    }
    return 0.0;
}

namespace {

double safe_ratio(double value, double base) {
    if (base == 0.0)
        return value == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return value / base;
}

} // namespace

double RiskReport::ratio(std::size_t scenario, std::size_t dealer, Measure m) const {
    return safe_ratio(value(scenario, dealer, m), value(base_index(), dealer, m));
}

double RiskReport::total_ratio(std::size_t scenario) const {
    return safe_ratio(scenarios.at(scenario).total_ee, scenarios[base_index()].total_ee);
}

double RiskReport::mean_max_ratio(std::size_t scenario) const {
    return safe_ratio(scenarios.at(scenario).mean_max, scenarios[base_index()].mean_max);
}

namespace {

struct BlockMoments {
    std::vector<stats::Moments> cells; // scenario-major, dealer-minor
    std::vector<stats::Moments> totals;
    std::vector<stats::Moments> maxima;
};

struct BlockReductions {
    // reductions[r] holds (dealer, value) in path order for non-base scenario r
    std::vector<std::vector<std::pair<std::uint32_t, double>>> per_scenario;
};

// Keeps the `cap` largest values of each cell. The retained multiset does not
// depend on the order in which blocks arrive.
class TailKeeper {
public:
    TailKeeper(std::size_t cells, std::size_t cap) : cap_(cap), tails_(cells) {}

    static void keep_largest(std::vector<double>& v, std::size_t cap) {
        if (v.size() <= cap)
            return;
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() - cap), v.end());
        v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() - cap));
    }

    void merge(std::vector<std::vector<double>>& local) {
        std::lock_guard lock(mutex_);
        for (std::size_t c = 0; c < tails_.size(); ++c) {
            auto& t = tails_[c];
            t.insert(t.end(), local[c].begin(), local[c].end());
            if (t.size() > 2 * cap_)
                keep_largest(t, cap_);
        }
    }

    std::vector<double> finish(std::size_t cell) {
        auto& t = tails_[cell];
        keep_largest(t, cap_);
        std::sort(t.begin(), t.end());
        return std::move(t);
    }

private:
    std::size_t cap_;
    std::vector<std::vector<double>> tails_;
    std::mutex mutex_;
};

std::vector<std::pair<std::size_t, std::size_t>> subadditivity_pairs(
    std::span<const ClearingScenario> scenarios, std::size_t k_count) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < scenarios.size(); ++a) {
        if (scenarios[a].kind != ScenarioKind::JointCCP)
            continue;
        for (std::size_t b = 0; b < scenarios.size(); ++b)
            if (scenarios[b].kind == ScenarioKind::TwoCCPs &&
                scenarios[a].fractions(k_count) == scenarios[b].fractions(k_count))
                pairs.emplace_back(a, b);
    }
    return pairs;
}

} // namespace

RiskReport simulate(const MarketConfig& config, const SamplingModel& model,
                    std::span<const ClearingScenario> scenarios, const SimulationOptions& options) {
    require_valid(config);
    const std::size_t n = config.num_dealers();
    const std::size_t k_count = config.num_classes();
    const std::size_t s_count = scenarios.size();
    if (options.n_paths < options.min_paths)
        throw std::invalid_argument(
            fmt::format("n_paths = {} is below the floor of {}", options.n_paths, options.min_paths));
    if (!(options.level > 0.0 && options.level < 1.0))
        throw std::invalid_argument("risk level must lie in (0, 1)");
    if (model.marginals.size() != k_count)
        throw std::invalid_argument("sampling model does not match the class count");
    if (!(model.rho >= 0.0 && model.rho < 1.0))
        throw std::invalid_argument("sampling model rho must lie in [0, 1)");
    if (options.block_paths == 0)
        throw std::invalid_argument("block_paths must be positive");

    std::vector<CompiledScenario> compiled;
    std::size_t base = s_count;
    for (std::size_t s = 0; s < s_count; ++s) {
        compiled.push_back(compile(scenarios[s], k_count));
        if (base == s_count && scenarios[s].kind == ScenarioKind::NoCCP)
            base = s;
    }
    if (base == s_count)
        throw std::invalid_argument("scenario list needs a no_ccp base scenario");
    const auto sub_pairs = subadditivity_pairs(scenarios, k_count);

    const PairScaleTable scales(config);
    const CounterNoise noise(options.seed);
    const double unit = config.report_scale;
    const std::uint64_t n_paths = options.n_paths;
    const std::uint64_t block = options.block_paths;
    const std::size_t n_blocks = static_cast<std::size_t>((n_paths + block - 1) / block);
    const std::size_t cells = s_count * n;
    const std::size_t cap = stats::tail_capacity(static_cast<std::size_t>(n_paths), options.level);

    std::vector<BlockMoments> moments(n_blocks);
    std::vector<BlockReductions> reductions(n_blocks);
    TailKeeper tails(cells, cap);

    auto run_block = [&](std::size_t b) {
        const std::uint64_t first = b * block;
        const std::uint64_t last = std::min<std::uint64_t>(first + block, n_paths);
        BlockMoments bm{std::vector<stats::Moments>(cells), std::vector<stats::Moments>(s_count),
                        std::vector<stats::Moments>(s_count)};
        std::vector<std::vector<double>> local(cells);
        for (auto& v : local)
            v.reserve(static_cast<std::size_t>(last - first));
        const bool keep_reductions = first < options.reduction_paths;
        BlockReductions br;
        if (keep_reductions)
            br.per_scenario.resize(s_count);

        ExposureDraw draw(n, k_count);
        std::vector<double> e(cells);
        for (std::uint64_t p = first; p < last; ++p) {
            sample_draw(scales, model, noise, p, draw);
            for (std::size_t s = 0; s < s_count; ++s) {
                double total = 0.0;
                double worst = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double v = evaluate_scenario(draw, compiled[s], i) * unit;
                    e[s * n + i] = v;
                    total += v;
                    worst = std::max(worst, v);
                    bm.cells[s * n + i].add(v);
                    local[s * n + i].push_back(v);
                }
                bm.totals[s].add(total);
                bm.maxima[s].add(worst);
            }
            if (options.check_invariants) {
                for (double v : e)
                    if (!(v >= 0.0))
                        throw std::logic_error(fmt::format("negative exposure on path {}", p));
                for (auto [joint, two] : sub_pairs)
                    for (std::size_t i = 0; i < n; ++i) {
                        const double a = e[joint * n + i];
                        const double c = e[two * n + i];
                        if (a > c + 1e-12 * std::max(1.0, std::fabs(c)))
                            throw std::logic_error(fmt::format(
                                "joint CCP exposure exceeds separate CCPs on path {}, dealer {}", p, i));
                    }
            }
            if (keep_reductions && p < options.reduction_paths) {
                for (std::size_t s = 0; s < s_count; ++s) {
                    if (s == base)
                        continue;
                    for (std::size_t i = 0; i < n; ++i)
                        br.per_scenario[s].emplace_back(static_cast<std::uint32_t>(i),
                                                        e[base * n + i] - e[s * n + i]);
                }
            }
        }
        for (auto& v : local)
            TailKeeper::keep_largest(v, cap);
        tails.merge(local);
        moments[b] = std::move(bm);
        if (keep_reductions)
            reductions[b] = std::move(br);
    };

    unsigned workers = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(n_blocks, 1)));
    if (workers == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            run_block(b);
    } else {
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr error;
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t b; (b = next.fetch_add(1)) < n_blocks;) {
                    try {
                        run_block(b);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                        next = n_blocks;
                    }
                }
            });
        }
        pool.clear();
        if (error)
            std::rethrow_exception(error);
    }

    // Sequential reduction in block order.
    std::vector<stats::Moments> cell_m(cells), total_m(s_count), max_m(s_count);
    for (const auto& bm : moments) {
        for (std::size_t c = 0; c < cells; ++c)
            cell_m[c].merge(bm.cells[c]);
        for (std::size_t s = 0; s < s_count; ++s) {
            total_m[s].merge(bm.totals[s]);
            max_m[s].merge(bm.maxima[s]);
        }
    }

    RiskReport report;
    for (const auto& d : config.dealers)
        report.dealers.push_back(d.name);
    report.n_paths = n_paths;
    report.seed = options.seed;
    report.level = options.level;
    report.rho = model.rho;
    report.antisymmetric = model.antisymmetric;
    for (std::size_t k = 0; k < k_count; ++k)
        report.marginals.push_back(fmt::format("{}={}", config.classes[k].name, to_string(model.marginals[k])));

    for (std::size_t s = 0; s < s_count; ++s) {
        ScenarioReport sr;
        sr.id = scenarios[s].id;
        sr.kind = scenarios[s].kind;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& m = cell_m[s * n + i];
            const auto upper = tails.finish(s * n + i);
            const auto tail = stats::tail_estimate(upper, static_cast<std::size_t>(n_paths), options.level);
            CellEstimate cell;
            cell.ee = m.mean;
            cell.ee_se = m.std_error();
            cell.var = tail.var;
            cell.es = tail.es;
            cell.exceedances = tail.exceedances;
            cell.low_confidence = tail.exceedances < kMinTailExceedances;
            sr.dealers.push_back(cell);
        }
        sr.total_ee = total_m[s].mean;
        sr.total_ee_se = total_m[s].std_error();
        sr.mean_max = max_m[s].mean;
        sr.mean_max_se = max_m[s].std_error();
        report.scenarios.push_back(std::move(sr));
    }

    if (options.reduction_paths > 0) {
        for (std::size_t s = 0; s < s_count; ++s) {
            if (s == base)
                continue;
            ExposureReduction r;
            r.scenario = scenarios[s].id;
            for (const auto& br : reductions) {
                if (br.per_scenario.empty())
                    continue;
                for (auto [dealer, v] : br.per_scenario[s]) {
                    r.dealer.push_back(dealer);
                    r.value.push_back(v);
                }
            }
            r.histogram = stats::freedman_diaconis(r.value);
            report.reductions.push_back(std::move(r));
        }
    }
    return report;
}

} // namespace ccpnet::mc
