#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sparseclass/classifiers.hpp"
#include "sparseclass/distribution.hpp"
#include "sparseclass/exact.hpp"
#include "sparseclass/experiments.hpp"
#include "sparseclass/sampling.hpp"

namespace py = pybind11;
using namespace sparseclass;

namespace {

SeedSpec make_seed(std::uint64_t master, std::uint64_t trial, std::uint32_t label) {
    return SeedSpec{master, trial, label};
}

ClassifierFn classifier_fn(const std::string& name) {
    const ClassifierId id = classifier_from_string(name);
    switch (id) {
        case ClassifierId::F:
            return [](const Histogram& ax, const Histogram& ay, const Histogram& az) {
                return classify_f(ax, ay, az);
            };
        case ClassifierId::T:
            return [](const Histogram& ax, const Histogram& ay, const Histogram& az) {
                return classify_t(ax, ay, az);
            };
        default:
            throw std::invalid_argument("exact_error_bruteforce supports classifiers F and T");
    }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sparse-sample binary classification over large alphabets";

    py::class_<Distribution>(m, "Distribution")
        .def(py::init<std::vector<double>>(), py::arg("probs"))
        .def_property_readonly("m", &Distribution::m)
        .def_property_readonly("probs", &Distribution::probs)
        .def("__len__", &Distribution::m)
        .def("__getitem__", [](const Distribution& d, std::uint32_t j) {
            if (j >= d.m()) throw py::index_error();
            return d[j];
        });

    py::class_<Histogram>(m, "Histogram")
        .def(py::init(&Histogram::from_counts), py::arg("counts"))
        .def_property_readonly("m", &Histogram::m)
        .def_property_readonly("total", &Histogram::total)
        .def_property_readonly("counts", &Histogram::counts)
        .def_property_readonly("support", &Histogram::support);

    py::class_<MembershipReport>(m, "MembershipReport")
        .def_readonly("ok", &MembershipReport::ok)
        .def_readonly("l1", &MembershipReport::l1)
        .def_readonly("max_pi", &MembershipReport::max_pi)
        .def_readonly("max_mu", &MembershipReport::max_mu)
        .def_readonly("violations", &MembershipReport::violations);

    py::class_<ErrorEstimate>(m, "ErrorEstimate")
        .def_readonly("trials", &ErrorEstimate::trials)
        .def_readonly("errors_h0", &ErrorEstimate::errors_h0)
        .def_readonly("errors_h1", &ErrorEstimate::errors_h1)
        .def_readonly("p_hat", &ErrorEstimate::p_hat)
        .def_readonly("ci_low", &ErrorEstimate::ci_low)
        .def_readonly("ci_high", &ErrorEstimate::ci_high)
        .def("censored", &ErrorEstimate::censored);

    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("scale", &BoundReport::scale)
        .def_readonly("gamma", &BoundReport::gamma)
        .def_readonly("linear_coefficient", &BoundReport::linear_coefficient)
        .def_readonly("quadratic_coefficient", &BoundReport::quadratic_coefficient)
        .def_readonly("linear_term", &BoundReport::linear_term)
        .def_readonly("quadratic_term", &BoundReport::quadratic_term)
        .def_readonly("main_term", &BoundReport::main_term)
        .def_readonly("dropped_remainder_note", &BoundReport::dropped_remainder_note);

    py::class_<ConditionalFalseAlarmResult>(m, "ConditionalFalseAlarmResult")
        .def_readonly("k", &ConditionalFalseAlarmResult::k)
        .def_readonly("trials", &ConditionalFalseAlarmResult::trials)
        .def_readonly("conditional_errors", &ConditionalFalseAlarmResult::conditional_errors)
        .def_readonly("p_cond", &ConditionalFalseAlarmResult::p_cond)
        .def_readonly("ci_low", &ConditionalFalseAlarmResult::ci_low)
        .def_readonly("ci_high", &ConditionalFalseAlarmResult::ci_high)
        .def_readonly("log_prob_cn", &ConditionalFalseAlarmResult::log_prob_cn)
        .def_readonly("asymptote", &ConditionalFalseAlarmResult::asymptote)
        .def_readonly("implied_log_pe_bound", &ConditionalFalseAlarmResult::implied_log_pe_bound);

    m.def("uniform", &uniform, py::arg("m"));
    m.def(
        "bi_uniform",
        [](std::uint32_t m, double epsilon, std::optional<std::vector<std::uint32_t>> omega) {
            BiUniformSpec spec = canonical_bi_uniform_spec(m, epsilon);
            if (omega) spec.omega = *omega;
            return bi_uniform(spec);
        },
        py::arg("m"), py::arg("epsilon"), py::arg("omega") = std::nullopt,
        "Bi-uniform distribution; omega defaults to the first m/2 symbols");
    m.def("l1_distance", &l1_distance, py::arg("p"), py::arg("q"));
    m.def(
        "check_class_membership",
        [](const Distribution& pi, const Distribution& mu, double epsilon, double c_bar) {
            return check_class_membership(pi, mu, ModelClassParams{epsilon, c_bar, pi.m()});
        },
        py::arg("pi"), py::arg("mu"), py::arg("epsilon"), py::arg("c_bar"));

    m.def(
        "sample_histogram",
        [](const Distribution& dist, std::uint64_t size, std::uint64_t seed, std::uint64_t trial,
           std::uint32_t stream) { return sample_histogram(dist, size, make_seed(seed, trial, stream)); },
        py::arg("dist"), py::arg("size"), py::arg("seed"), py::arg("trial") = 0,
        py::arg("stream") = 0);
    m.def(
        "sample_conditioned_count",
        [](const Distribution& dist, std::uint64_t size, std::uint32_t pinned_symbol,
           std::uint64_t pinned_count, std::uint64_t seed, std::uint64_t trial, std::uint32_t stream) {
            return sample_conditioned_count(dist, size, pinned_symbol, pinned_count,
                                            make_seed(seed, trial, stream));
        },
        py::arg("dist"), py::arg("size"), py::arg("pinned_symbol"), py::arg("pinned_count"),
        py::arg("seed"), py::arg("trial") = 0, py::arg("stream") = 0);
    m.def(
        "poissonized_histogram",
        [](const Distribution& dist, double lam, std::uint64_t seed, std::uint64_t trial,
           std::uint32_t stream) { return poissonized_histogram(dist, lam, make_seed(seed, trial, stream)); },
        py::arg("dist"), py::arg("lam"), py::arg("seed"), py::arg("trial") = 0,
        py::arg("stream") = 0);
    m.def(
        "inflate_alphabet",
        [](const Histogram& hist, std::uint32_t b, std::uint64_t seed, std::uint64_t trial,
           std::uint32_t stream) { return inflate_alphabet(hist, b, make_seed(seed, trial, stream)); },
        py::arg("hist"), py::arg("b"), py::arg("seed"), py::arg("trial") = 0,
        py::arg("stream") = 0);

    m.def("f_statistic",
          py::overload_cast<const Histogram&, const Histogram&, const Histogram&>(&f_statistic),
          py::arg("ax"), py::arg("ay"), py::arg("az"));
    m.def("t_statistic",
          py::overload_cast<const Histogram&, const Histogram&, const Histogram&>(&t_statistic),
          py::arg("ax"), py::arg("ay"), py::arg("az"));
    m.def("classify_f",
          py::overload_cast<const Histogram&, const Histogram&, const Histogram&>(&classify_f),
          py::arg("ax"), py::arg("ay"), py::arg("az"));
    m.def("classify_t",
          py::overload_cast<const Histogram&, const Histogram&, const Histogram&>(&classify_t),
          py::arg("ax"), py::arg("ay"), py::arg("az"));
    m.def("oracle_lrt", &oracle_lrt, py::arg("az"), py::arg("pi"), py::arg("mu"));
    m.def(
        "profile", [](const Histogram& h) { return profile(h).phi; }, py::arg("h"),
        "phi[i-1] = number of symbols appearing exactly i times");
    m.def("event_a", &event_A, py::arg("ax"), py::arg("ay"));
    m.def("event_b",
          py::overload_cast<const Histogram&, const Histogram&, const Histogram&>(&event_B),
          py::arg("ax"), py::arg("ay"), py::arg("az"));

    m.def("normalization_r", &normalization_r, py::arg("N"), py::arg("n"), py::arg("m"));
    m.def(
        "prob_all_distinct_uniform",
        [](std::uint64_t m, std::uint64_t N) { return prob_all_distinct_uniform(m, N).value; },
        py::arg("m"), py::arg("N"), "Natural-log probability");
    m.def(
        "prob_all_distinct",
        [](const Distribution& dist, std::uint64_t N) { return prob_all_distinct(dist, N).value; },
        py::arg("dist"), py::arg("N"));
    m.def(
        "bi_uniform_all_distinct_convolution",
        [](std::uint32_t m, double epsilon, std::uint64_t N) {
            return bi_uniform_all_distinct_convolution(m, epsilon, N).value;
        },
        py::arg("m"), py::arg("epsilon"), py::arg("N"));
    m.def(
        "prob_event_a",
        [](const Distribution& dx, const Distribution& dy, std::uint64_t N) {
            return prob_event_A(dx, dy, N).value;
        },
        py::arg("dist_x"), py::arg("dist_y"), py::arg("N"));
    m.def("lemma_a_rate", &lemma_A_rate, py::arg("epsilon"), py::arg("N"), py::arg("m"));
    m.def(
        "prob_event_b_given_xy",
        [](const Histogram& ax, const Histogram& ay, const Distribution& z, std::uint64_t n) {
            return prob_event_B_given_xy(ax, ay, z, n).value;
        },
        py::arg("ax"), py::arg("ay"), py::arg("z_dist"), py::arg("n"));
    m.def(
        "prob_event_b_uniform",
        [](std::uint64_t m, std::uint64_t s, std::uint64_t n) {
            return prob_event_B_uniform(m, s, n).value;
        },
        py::arg("m"), py::arg("s"), py::arg("n"));
    m.def(
        "prob_c_n",
        [](std::uint64_t m, std::uint64_t N, std::uint64_t n) {
            const CnReport r = prob_C_n(m, N, n);
            return py::make_tuple(r.k, r.exact.value, r.asymptote);
        },
        py::arg("m"), py::arg("N"), py::arg("n"), "Returns (k, exact_log_pmf, asymptote)");

    m.def("chernoff_lambda_bound", &chernoff_lambda_bound, py::arg("pi"), py::arg("mu"),
          py::arg("nu"), py::arg("gamma"), py::arg("N"), py::arg("n"));
    m.def("chernoff_optimal_gamma", &chernoff_optimal_gamma, py::arg("pi"), py::arg("mu"),
          py::arg("nu"));
    m.def("achievability_exponent", &achievability_exponent, py::arg("epsilon"), py::arg("c_bar"));

    m.def(
        "exact_error_bruteforce",
        [](const Distribution& pi, const Distribution& mu, std::uint64_t N, std::uint64_t n,
           const std::string& classifier, double budget) {
            return exact_error_bruteforce(pi, mu, N, n, classifier_fn(classifier), budget);
        },
        py::arg("pi"), py::arg("mu"), py::arg("N"), py::arg("n"), py::arg("classifier") = "T",
        py::arg("budget") = 1e8);

    m.def(
        "estimate_error",
        [](const Distribution& pi, const Distribution& mu, std::uint64_t N, std::uint64_t n,
           const std::string& classifier, std::uint64_t trials, std::uint64_t seed,
           double confidence, unsigned threads) {
            EstimateOptions options;
            options.confidence = confidence;
            options.threads = threads;
            return estimate_error(pi, mu, N, n, classifier_from_string(classifier), trials, seed,
                                  options);
        },
        py::arg("pi"), py::arg("mu"), py::arg("N"), py::arg("n"), py::arg("classifier"),
        py::arg("trials"), py::arg("seed"), py::arg("confidence") = 0.95, py::arg("threads") = 1);

    m.def(
        "conditional_false_alarm_experiment",
        [](std::uint64_t m, std::uint64_t N, std::uint64_t n, double epsilon, std::uint64_t trials,
           std::uint64_t seed, double confidence, unsigned threads) {
            return conditional_false_alarm_experiment(m, N, n, epsilon, trials, seed, confidence,
                                                      threads);
        },
        py::arg("m"), py::arg("N"), py::arg("n"), py::arg("epsilon"), py::arg("trials"),
        py::arg("seed"), py::arg("confidence") = 0.95, py::arg("threads") = 1);
}
