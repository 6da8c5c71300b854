#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "djsim/oracle.hpp"
#include "djsim/state_vector.hpp"
#include "test_support.hpp"

using djsim::classify;
using djsim::FunctionClass;
using djsim::OracleCircuit;
using djsim::OracleGate;
using djsim::parse_truth_table;
using djsim::synthesize_gates;
using djsim::synthesize_permutation;
using djsim::TruthTable;

namespace {

const TruthTable kConstantOnes(3, {1, 1, 1, 1, 1, 1, 1, 1});
const TruthTable kBalancedTopBit(3, {0, 0, 0, 0, 1, 1, 1, 1});  // f(x) = x2

bool satisfies_uf_equation(const OracleCircuit& oc, const TruthTable& t) {
    const std::uint64_t half = std::uint64_t{1} << oc.n;
    for (std::uint64_t y = 0; y <= 1; ++y) {
        for (std::uint64_t x = 0; x < half; ++x) {
            if (oc.permutation[x + half * y] != x + half * (y ^ t(x))) return false;
        }
    }
    return true;
}

bool is_involution(const std::vector<std::uint64_t>& perm) {
    for (std::uint64_t k = 0; k < perm.size(); ++k) {
        if (perm[perm[k]] != k) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("classification by the count of ones") {
    CHECK(classify(kConstantOnes) == FunctionClass::Constant);
    CHECK(classify(TruthTable(3, std::vector<std::uint8_t>(8, 0))) == FunctionClass::Constant);
    CHECK(classify(kBalancedTopBit) == FunctionClass::Balanced);
    CHECK(classify(TruthTable(2, {1, 0, 0, 0})) == FunctionClass::Neither);

    CHECK(classify(TruthTable(1, {0, 0})) == FunctionClass::Constant);
    CHECK(classify(TruthTable(1, {1, 1})) == FunctionClass::Constant);
    CHECK(classify(TruthTable(1, {0, 1})) == FunctionClass::Balanced);
    CHECK(classify(TruthTable(1, {1, 0})) == FunctionClass::Balanced);
}

TEST_CASE("truth table constructor validates shape") {
    CHECK_THROWS_AS(TruthTable(0, {}), djsim::Error);
    CHECK_THROWS_AS(TruthTable(2, {0, 1}), djsim::Error);
    CHECK_THROWS_AS(TruthTable(1, {0, 2}), djsim::Error);
}

TEST_CASE("n=1 identity function synthesizes the cnot permutation") {
    const OracleCircuit oc = synthesize_permutation(TruthTable(1, {0, 1}));
    CHECK(oc.permutation == std::vector<std::uint64_t>{0, 3, 2, 1});
}

TEST_CASE("constant-ones table synthesizes X on the ancilla") {
    const OracleCircuit oc = synthesize_permutation(kConstantOnes);
    for (std::uint64_t x = 0; x < 8; ++x) {
        CHECK(oc.permutation[x] == x + 8);      // |x>|0> -> |x>|1>
        CHECK(oc.permutation[x + 8] == x);
    }
}

TEST_CASE("top-bit table synthesizes cnot from x2 to the ancilla") {
    const OracleCircuit oc = synthesize_permutation(kBalancedTopBit);
    for (std::uint64_t k = 0; k < 16; ++k) {
        const std::uint64_t expect = (k >> 2 & 1) ? (k ^ 8) : k;
        CHECK(oc.permutation[k] == expect);
    }
}

TEST_CASE("synthesized permutations satisfy the defining equation") {
    for (int n = 1; n <= 3; ++n) {
        for (const TruthTable& t : test_support::all_tables(n)) {
            const OracleCircuit oc = synthesize_permutation(t);
            REQUIRE(satisfies_uf_equation(oc, t));
            REQUIRE(is_involution(oc.permutation));
        }
    }
}

TEST_CASE("random tables up to n=8 synthesize involutions") {
    djsim::SplitMix64 gen(2024);
    for (int k = 0; k < 200; ++k) {
        const int n = 1 + static_cast<int>(gen.next() % 8);
        const TruthTable t = test_support::random_table(n, gen);
        const OracleCircuit oc = synthesize_permutation(t);
        REQUIRE(satisfies_uf_equation(oc, t));
        REQUIRE(is_involution(oc.permutation));
    }
}

TEST_CASE("phase kickback on |x>|->") {
    djsim::SplitMix64 gen(515);
    auto check_kickback = [](const TruthTable& t) {
        const OracleCircuit oc = synthesize_permutation(t);
        const std::uint64_t half = std::uint64_t{1} << t.n();
        for (std::uint64_t x = 0; x < half; ++x) {
            djsim::StateVector s = test_support::x_times_minus(t.n(), x);
            const auto before = test_support::to_vector(s);
            s.apply_permutation(oc.permutation);
            const double sign = t(x) ? -1.0 : 1.0;
            for (std::uint64_t k = 0; k < before.size(); ++k) {
                REQUIRE(std::abs(s.amplitude(k) - sign * before[k]) < 1e-12);
            }
        }
    };
    for (const TruthTable& t : test_support::all_tables(2)) check_kickback(t);
    for (int k = 0; k < 25; ++k) {
        check_kickback(test_support::random_table(1 + static_cast<int>(gen.next() % 5), gen));
    }
}

TEST_CASE("applying U_f equals multiplying its full permutation matrix") {
    std::vector<TruthTable> tables = {kConstantOnes, kBalancedTopBit, TruthTable(1, {0, 1})};
    djsim::SplitMix64 gen(88);
    tables.push_back(test_support::random_table(2, gen));
    for (const TruthTable& t : tables) {
        const OracleCircuit oc = synthesize_permutation(t);
        const auto matrix = test_support::permutation_matrix(oc.permutation);
        for (std::uint64_t b = 0; b < oc.permutation.size(); ++b) {
            djsim::StateVector s = djsim::StateVector::basis(t.n() + 1, b);
            const auto reference = test_support::matvec(matrix, test_support::to_vector(s));
            s.apply_permutation(oc.permutation);
            REQUIRE(test_support::to_vector(s) == reference);
        }
    }
}

TEST_CASE("gate synthesis reduces the paper-style examples to single gates") {
    const OracleCircuit constant = synthesize_gates(kConstantOnes);
    REQUIRE(constant.gate_list.has_value());
    REQUIRE(constant.gate_list->size() == 1);
    CHECK((*constant.gate_list)[0] == OracleGate{{}, 3});

    const OracleCircuit balanced = synthesize_gates(kBalancedTopBit);
    REQUIRE(balanced.gate_list.has_value());
    REQUIRE(balanced.gate_list->size() == 1);
    CHECK((*balanced.gate_list)[0] == OracleGate{{2}, 3});

    const OracleCircuit negation = synthesize_gates(TruthTable(1, {1, 0}));
    REQUIRE(negation.gate_list.has_value());
    REQUIRE(negation.gate_list->size() == 2);
    CHECK((*negation.gate_list)[0] == OracleGate{{}, 1});
    CHECK((*negation.gate_list)[1] == OracleGate{{0}, 1});
}

TEST_CASE("gate synthesis composes to the direct permutation for all small tables") {
    for (int n = 1; n <= 3; ++n) {
        for (const TruthTable& t : test_support::all_tables(n)) {
            const OracleCircuit direct = synthesize_permutation(t);
            const OracleCircuit gates = synthesize_gates(t);
            REQUIRE(gates.gate_list.has_value());
            const auto composed = djsim::permutation_of_gates(n, *gates.gate_list);
            REQUIRE(composed == direct.permutation);
            REQUIRE(gates.permutation == direct.permutation);
        }
    }
}

TEST_CASE("neither tables are accepted by synthesis") {
    const TruthTable t(2, {1, 0, 0, 0});
    CHECK(classify(t) == FunctionClass::Neither);
    const OracleCircuit oc = synthesize_gates(t);
    CHECK(satisfies_uf_equation(oc, t));
    CHECK(is_involution(oc.permutation));
}

TEST_CASE("truth table files parse") {
    const TruthTable constant =
        parse_truth_table(test_support::read_file(test_support::repo_path("tables/constant_n3.tt")));
    CHECK(constant.n() == 3);
    CHECK(constant.outputs() == kConstantOnes.outputs());

    const TruthTable balanced =
        parse_truth_table(test_support::read_file(test_support::repo_path("tables/balanced_n3.tt")));
    CHECK(balanced.outputs() == kBalancedTopBit.outputs());

    const TruthTable identity = parse_truth_table("n=1\n0 0\n1 1\n");
    CHECK(identity.outputs() == std::vector<std::uint8_t>{0, 1});
}

TEST_CASE("truth table parser reports located errors") {
    using djsim::ParseError;

    // non-bit character, line 3
    try {
        parse_truth_table("n=3\n000 1\n00x 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.col == 3);
    }

    CHECK_THROWS_AS(parse_truth_table(""), ParseError);                      // no header
    CHECK_THROWS_AS(parse_truth_table("n=zero\n"), ParseError);              // bad header
    CHECK_THROWS_AS(parse_truth_table("n=1\n0 0\n"), ParseError);            // missing rows
    CHECK_THROWS_AS(parse_truth_table("n=1\n0 0\n1 1\n0 1\n"), ParseError);  // extra row
    CHECK_THROWS_AS(parse_truth_table("n=1\n1 0\n0 1\n"), ParseError);       // out of order
    CHECK_THROWS_AS(parse_truth_table("n=1\n0 0\n0 1\n"), ParseError);       // duplicate
    CHECK_THROWS_AS(parse_truth_table("n=1\n0 2\n1 1\n"), ParseError);       // bad output
    CHECK_THROWS_AS(parse_truth_table("n=2\n00 1\n01 1\n1 1\n11 1\n"), ParseError);  // short input
}

TEST_CASE("comments and blank lines are ignored") {
    const TruthTable t = parse_truth_table("# header comment\nn=1\n\n# data\n0 1\n1 1\n");
    CHECK(t.outputs() == std::vector<std::uint8_t>{1, 1});
}
