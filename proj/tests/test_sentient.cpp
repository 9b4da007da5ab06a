// Copyright 2026 The Edgeworth Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include "doctest.h"
#include "edgeworth/sentient.hpp"
#include "support.hpp"

using namespace edgeworth;

TEST_SUITE("sentient") {

TEST_CASE("pleasure matches hand-computed values") {
    const Sentient log1("a", 1.0, 1.0, ResponseCurve::logarithmic());
    const Sentient log2("b", 2.0, 1.0, ResponseCurve::logarithmic());
    const Sentient pow1("c", 1.0, 4.0, ResponseCurve::power(0.5));
    CHECK(pleasure(log1, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pleasure(log2, std::exp(1.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pleasure(pow1, 9.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("marginal pleasure matches hand-computed values") {
    const Sentient log1("a", 1.0, 1.0, ResponseCurve::logarithmic());
    const Sentient log3("b", 3.0, 1.0, ResponseCurve::logarithmic());
    const Sentient pow1("c", 1.0, 0.0, ResponseCurve::power(0.5));
    CHECK(marginal_pleasure(log1, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(marginal_pleasure(log3, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(marginal_pleasure(pow1, 4.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("total pleasure sums per-sentient values") {
    const ResponseCurve log = ResponseCurve::logarithmic();
    const Population two({Sentient("a", 1.0, 1.0, log), Sentient("b", 1.0, 1.0, log)});
    const double e = std::exp(1.0);
    CHECK(total_pleasure(two, Allocation({e, e})) == doctest::Approx(2.0).epsilon(1e-12));

    const Population one({Sentient("a", 1.0, 1.5, log)});
    CHECK(total_pleasure(one, Allocation({1.5})) == doctest::Approx(0.0).epsilon(1e-12));

    const Population pair({Sentient("a", 1.0, 1.0, log), Sentient("b", 2.0, 1.0, log)});
    CHECK(total_pleasure(pair, Allocation({1.0, e})) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("domain and shape errors") {
    const Sentient s("a", 1.0, 1.0, ResponseCurve::logarithmic());
    CHECK_THROWS_AS(pleasure(s, 0.0), domain_error);
    CHECK_THROWS_AS(pleasure(s, -1.0), domain_error);
    CHECK_THROWS_AS(marginal_pleasure(s, 0.0), domain_error);

    const Population p({s, s});
    CHECK_THROWS_AS(total_pleasure(p, Allocation({1.0})), shape_error);
    CHECK_THROWS_AS(total_pleasure(p, Allocation({1.0, 0.0})), domain_error);
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(ResponseCurve::power(0.0), domain_error);
    CHECK_THROWS_AS(ResponseCurve::power(1.0), domain_error);
    CHECK_THROWS_AS(Sentient("a", 0.0, 1.0, ResponseCurve::logarithmic()), validation_error);
    CHECK_THROWS_AS(Sentient("a", 1.0, 0.0, ResponseCurve::logarithmic()), validation_error);
    CHECK_THROWS_AS(Sentient("a", 1.0, -1.0, ResponseCurve::power(0.5)), validation_error);
    CHECK_NOTHROW(Sentient("a", 1.0, 0.0, ResponseCurve::power(0.5)));
    CHECK_THROWS_AS(Population({}), validation_error);
    CHECK_THROWS_AS(Population({Sentient("a", 1.0, 1.0, ResponseCurve::logarithmic()),
                                Sentient("b", 1.0, 0.5, ResponseCurve::power(0.5))}),
                    validation_error);
}

TEST_CASE("pleasure is strictly increasing and strictly concave") {
    const std::vector<Sentient> cases = {
        Sentient("log", 1.7, 0.3, ResponseCurve::logarithmic()),
        Sentient("pow", 0.9, 0.2, ResponseCurve::power(0.35)),
    };
    for (const Sentient& s : cases) {
        auto gen = testsupport::rng(7);
        for (int i = 0; i < 120; ++i) {
            const double y = std::exp(testsupport::uniform(gen, std::log(1e-2), std::log(1e2)));
            const double h = 1e-4 * y;
            CHECK(pleasure(s, y + h) > pleasure(s, y));
            const double second =
                (pleasure(s, y + h) - 2.0 * pleasure(s, y) + pleasure(s, y - h)) / (h * h);
            CHECK(second < 0.0);
        }
    }
}

TEST_CASE("marginal pleasure matches central differences on a log grid") {
    const std::vector<Sentient> cases = {
        Sentient("log", 2.3, 0.7, ResponseCurve::logarithmic()),
        Sentient("pow", 1.1, 0.1, ResponseCurve::power(0.6)),
    };
    for (const Sentient& s : cases) {
        for (int i = 0; i <= 60; ++i) {
            const double y = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
            const double h = 1e-5 * y;
            const double fd = testsupport::central_difference(
                [&](double v) { return pleasure(s, v); }, y, h);
            const double analytic = marginal_pleasure(s, y);
            CHECK(std::abs(fd - analytic) <= 1e-6 * std::abs(analytic));
        }
    }
}

TEST_CASE("pleasure vanishes exactly at the threshold") {
    auto gen = testsupport::rng(11);
    for (int i = 0; i < 50; ++i) {
        const double beta = testsupport::uniform(gen, 0.05, 20.0);
        const Sentient slog("l", testsupport::uniform(gen, 0.1, 5.0), beta,
                            ResponseCurve::logarithmic());
        const Sentient spow("p", testsupport::uniform(gen, 0.1, 5.0), beta,
                            ResponseCurve::power(testsupport::uniform(gen, 0.1, 0.9)));
        CHECK(std::abs(pleasure(slog, beta)) <= 1e-12);
        CHECK(std::abs(pleasure(spow, beta)) <= 1e-12);
    }
}

TEST_CASE("total pleasure equals the sum of individual calls") {
    auto gen = testsupport::rng(13);
    std::vector<Sentient> members;
    std::vector<double> amounts;
    for (int i = 0; i < 9; ++i) {
        members.emplace_back("s" + std::to_string(i), testsupport::uniform(gen, 0.2, 4.0),
                             testsupport::uniform(gen, 0.05, 2.0), ResponseCurve::logarithmic());
        amounts.push_back(testsupport::uniform(gen, 0.1, 6.0));
    }
    const Population p(members);
    double expected = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) expected += pleasure(p.at(i), amounts[i]);
    CHECK(std::abs(total_pleasure(p, Allocation(amounts)) - expected) <= 1e-12);
}

TEST_CASE("below the threshold pleasure reads as pain") {
    const Sentient s("a", 1.5, 2.0, ResponseCurve::logarithmic());
    CHECK(pleasure(s, 1.0) < 0.0);
}

}  // TEST_SUITE
