/// @file test_io.cpp
/// @brief Tests for configuration parsing, CSV emission, exit codes, and
///        the report-table builders.

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "swirllab/core.hpp"
#include "swirllab/io.hpp"

namespace {

using swirllab::Error;
using swirllab::ErrorCode;
using namespace swirllab::io;

double cell_num(const CsvTable& t, std::size_t row, std::size_t col) {
    return std::stod(t.rows.at(row).at(col));
}

// ---------------------------------------------------------------------------
// Formatting and CSV
// ---------------------------------------------------------------------------

TEST(FormatTest, FifteenSignificantDigits) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333333");
    EXPECT_EQ(format_double(1e-15), "1e-15");
    EXPECT_EQ(format_double(3.14159265358979323846), "3.14159265358979");
    EXPECT_EQ(format_double(-2.0), "-2");
    EXPECT_EQ(format_long(42), "42");
    EXPECT_EQ(format_bool(true), "1");
    EXPECT_EQ(format_bool(false), "0");
}

TEST(CsvTest, EscapingRules) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
    EXPECT_EQ(csv_escape(""), "");
}

TEST(CsvTest, RendersCommentsHeaderRowsWithLf) {
    CsvTable t;
    t.comments = {"tool=swirllab", "alpha=2.5"};
    t.header = {"a", "b,c", "d"};
    t.rows = {{"1", "x\"y", "plain"}, {"2", "", "line\nbreak"}};
    const std::string want =
        "# tool=swirllab\n"
        "# alpha=2.5\n"
        "a,\"b,c\",d\n"
        "1,\"x\"\"y\",plain\n"
        "2,,\"line\nbreak\"\n";
    EXPECT_EQ(to_csv_string(t), want);
}

TEST(CsvTest, RowWidthMismatchThrows) {
    CsvTable t;
    t.header = {"a", "b"};
    t.rows = {{"1"}};
    EXPECT_THROW(to_csv_string(t), Error);
}

TEST(CsvTest, WriteOutputRoundTrip) {
    const std::string path = "/tmp/swirllab_io_test.csv";
    const std::string content = "a,b\n1,2\n";
    write_output(path, content);
    std::ifstream f(path, std::ios::binary);
    std::string got((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
    EXPECT_EQ(got, content);
    std::remove(path.c_str());
    EXPECT_THROW(write_output("/nonexistent-dir/x.csv", content), Error);
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

TEST(ConfigTest, SectionsCommentsWhitespaceDuplicates) {
    const std::string text =
        "# top comment\n"
        "global_key = 7\n"
        "\n"
        "[field.norms]\n"
        "alpha = 2.5\n"
        "  j  =  4  \r\n"
        "; semicolon comment\n"
        "alpha = 2.8\n"
        "[analysis]\n"
        "empty =\n";
    const Config cfg = parse_config(text);
    EXPECT_TRUE(cfg.has("global_key"));
    EXPECT_EQ(cfg.get_long("global_key"), 7);
    EXPECT_EQ(cfg.get_double("field.norms.alpha"), 2.8);  // last wins
    EXPECT_EQ(cfg.get_long("field.norms.j"), 4);          // CR stripped
    EXPECT_EQ(cfg.get("analysis.empty", "fallback"), "");
    EXPECT_EQ(cfg.get("missing", "fallback"), "fallback");
    EXPECT_FALSE(cfg.has("alpha"));  // section-qualified only
}

TEST(ConfigTest, BooleanForms) {
    const Config cfg = parse_config(
        "a = 1\nb = TRUE\nc = off\nd = No\ne = maybe\n");
    EXPECT_TRUE(cfg.get_bool("a"));
    EXPECT_TRUE(cfg.get_bool("b"));
    EXPECT_FALSE(cfg.get_bool("c"));
    EXPECT_FALSE(cfg.get_bool("d"));
    EXPECT_THROW(cfg.get_bool("e"), Error);
}

TEST(ConfigTest, MalformedLinesCarryLineNumbers) {
    try {
        parse_config("ok = 1\nnot a pair\n");
        FAIL() << "missing equals accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
        EXPECT_EQ(e.index(), 2);
    }
    try {
        parse_config("[unclosed\n");
        FAIL() << "unclosed section accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.index(), 1);
    }
    EXPECT_THROW(parse_config("= value\n"), Error);
    const Config cfg = parse_config("k = abc\nn = 1.5\n");
    EXPECT_THROW(cfg.get_double("k"), Error);
    EXPECT_THROW(cfg.get_long("n"), Error);
    EXPECT_THROW(load_config_file("/no/such/file.cfg"), Error);
}

// ---------------------------------------------------------------------------
// Exit codes
// ---------------------------------------------------------------------------

TEST(ExitCodeTest, Policy) {
    EXPECT_EQ(exit_code_for(ErrorCode::UnknownSubcommand), 64);
    EXPECT_EQ(exit_code_for(ErrorCode::SingularSwirl), 2);
    EXPECT_EQ(exit_code_for(ErrorCode::NonFiniteSample), 2);
    EXPECT_EQ(exit_code_for(ErrorCode::DegenerateFit), 2);
    EXPECT_EQ(exit_code_for(ErrorCode::StepUnderflow), 2);
    EXPECT_EQ(exit_code_for(ErrorCode::ConfigInvalid), 1);
    EXPECT_EQ(exit_code_for(ErrorCode::AlphaOutOfRange), 1);
    EXPECT_EQ(exit_code_for(ErrorCode::EpsilonTooLarge), 1);
    EXPECT_EQ(exit_code_for(ErrorCode::AnnulusNotCertified), 1);
}

// ---------------------------------------------------------------------------
// Table builders
// ---------------------------------------------------------------------------

TEST(TableTest, AnnulusTableStructuralAndDeterministic) {
    swirllab::fields::ReferenceParams rp;
    rp.J_max = 3;
    const auto prof = swirllab::fields::build_reference_profile(rp);
    const CsvTable t = annulus_table(prof, false);
    ASSERT_EQ(t.header.size(), 11u);
    ASSERT_EQ(t.rows.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(t.rows[i][0], format_long(static_cast<long>(i + 1)));
    }
    // Budget identity: area * c is constant down the rows.
    EXPECT_NEAR(cell_num(t, 0, 3) * cell_num(t, 0, 4), 1.0, 1e-12);
    EXPECT_NEAR(cell_num(t, 2, 3) * cell_num(t, 2, 4), 1.0, 1e-12);
    // Byte-identical across rebuilds.
    const auto prof2 = swirllab::fields::build_reference_profile(rp);
    EXPECT_EQ(to_csv_string(annulus_table(prof2, false)), to_csv_string(t));
}

TEST(TableTest, AnnulusTableValidatedColumns) {
    swirllab::fields::ReferenceParams rp;
    rp.J_max = 4;
    const auto prof = swirllab::fields::build_reference_profile(rp);
    swirllab::fields::ValidateOptions vo;
    vo.samples_per_window = 64;
    vo.n_radii = 4;
    const CsvTable t = annulus_table(prof, true, vo);
    ASSERT_EQ(t.header.size(), 17u);
    ASSERT_EQ(t.rows.size(), 4u);
    ASSERT_FALSE(t.comments.empty());
    EXPECT_EQ(t.comments[0], "feasible_j_max=4");
    EXPECT_EQ(t.rows[0][11], "0");  // annulus 1 is not certified
    EXPECT_EQ(t.rows[1][11], "1");
    EXPECT_EQ(t.rows[3][11], "1");
}

TEST(TableTest, TruncatedEnergyTableMonotoneUnderEnvelope) {
    const auto field = swirllab::fields::make_tube_field(
        swirllab::fields::build_reference_profile(),
        swirllab::fields::FluxShape::rolloff);
    const CsvTable t = truncated_energy_table(field, 2, 64, 8);
    ASSERT_EQ(t.rows.size(), 2u);
    const double e1 = cell_num(t, 0, 4);
    const double e2 = cell_num(t, 1, 4);
    EXPECT_GT(e1, 0.0);
    EXPECT_GT(e2, e1);
    EXPECT_LT(e1, cell_num(t, 0, 5));
    EXPECT_LT(e2, cell_num(t, 1, 5));
    // Increment column is consistent and below the envelope increment.
    EXPECT_NEAR(cell_num(t, 1, 6), e2 - e1, 1e-12);
    EXPECT_LT(cell_num(t, 1, 6), cell_num(t, 1, 7));
    EXPECT_EQ(to_csv_string(truncated_energy_table(field, 2, 64, 8)),
              to_csv_string(t));
    EXPECT_THROW(truncated_energy_table(field, 0), Error);
}

TEST(TableTest, PartialSumTableShape) {
    const auto field = swirllab::fields::make_tube_field(
        swirllab::fields::build_reference_profile(),
        swirllab::fields::FluxShape::constant);
    const CsvTable t =
        partial_sum_table(field, swirllab::norms::SumMode::speed_alpha, 2);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.comments[0], "mode=alpha");
    EXPECT_NEAR(cell_num(t, 0, 1), 1.0, 1e-6);
    EXPECT_GT(cell_num(t, 1, 1), 0.9);
    EXPECT_EQ(t.rows[1][4], "1");  // included
}

TEST(TableTest, GrowthTableShape) {
    const auto field = swirllab::fields::make_tube_field(
        swirllab::fields::build_reference_profile(),
        swirllab::fields::FluxShape::rolloff);
    swirllab::fields::GrowthOptions opt;
    opt.s_max = 0.5;
    // On the short arc the divergence magnitude starts near 0.4, so the
    // qualifying floor must sit below that.
    const CsvTable t = growth_table(field, 0.3, 1e9, opt);
    ASSERT_EQ(t.rows.size(), 1u);
    ASSERT_EQ(t.header.size(), 7u);
    EXPECT_EQ(t.rows[0][0], "0.3");
    EXPECT_GT(cell_num(t, 0, 2), 0.0);   // A_emp
    EXPECT_EQ(t.rows[0][3], "0");        // cap not exceeded
    EXPECT_GT(cell_num(t, 0, 4), 0.0);   // qualifying samples
}

TEST(TableTest, LedgerTableShape) {
    const auto f = swirllab::degiorgi::make_radial_snapshot_family(2.5, 2.0, 512);
    const auto led = swirllab::degiorgi::degiorgi_driver(f, 10.0, 1.1, 3);
    const CsvTable t = ledger_table(led);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_EQ(t.rows[0][4], "");  // no domination ratio at stage 0
    EXPECT_FALSE(t.rows[1][4].empty());
    EXPECT_NEAR(cell_num(t, 0, 1), 0.5, 1e-15);  // window start at stage 0
    EXPECT_GT(cell_num(t, 0, 2), cell_num(t, 1, 2));  // U decreasing
}

TEST(TableTest, FeasibilityTableAdmissibleWitness) {
    const CsvTable t = feasibility_table(2.5);
    ASSERT_EQ(t.rows.size(), 1u);
    ASSERT_EQ(t.header.size(), 14u);
    EXPECT_NEAR(cell_num(t, 0, 1), 2.3423292192132452, 1e-12);
    EXPECT_EQ(t.rows[0][2], "1");   // admissible
    EXPECT_EQ(t.rows[0][13], "1");  // feasible
    EXPECT_NEAR(cell_num(t, 0, 5), 1.2666666666666666, 1e-12);  // beta
    EXPECT_NEAR(cell_num(t, 0, 6), 1.015625, 1e-15);            // p
    EXPECT_NEAR(cell_num(t, 0, 7), 1.0 / 24.0, 1e-15);          // delta
    for (int col : {8, 9, 10}) {
        EXPECT_GT(cell_num(t, 0, static_cast<std::size_t>(col)), 0.0);
    }
}

TEST(TableTest, FeasibilityTableInadmissibleStaysBlank) {
    const CsvTable t = feasibility_table(2.1);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][2], "0");
    EXPECT_EQ(t.rows[0][5], "");
    EXPECT_EQ(t.rows[0][13], "0");
}

TEST(TableTest, RecurrenceTableRegimes) {
    const CsvTable decay = recurrence_table(2.0, 5.0 / 3.0, 0.01, 200);
    ASSERT_EQ(decay.rows.size(), 200u);
    bool saw_decay = false;
    for (const std::string& c : decay.comments) {
        if (c == "regime=decay") saw_decay = true;
    }
    EXPECT_TRUE(saw_decay);
    EXPECT_EQ(decay.rows.back()[2], "0");            // a underflows to zero
    EXPECT_LT(cell_num(decay, 199, 1), -1e20);       // log_a plunges
    const CsvTable growth = recurrence_table(2.0, 5.0 / 3.0, 0.125, 200);
    bool saw_growth = false;
    for (const std::string& c : growth.comments) {
        if (c == "regime=growth") saw_growth = true;
    }
    EXPECT_TRUE(saw_growth);
    EXPECT_GT(cell_num(growth, 199, 1), 1e20);
}

TEST(TableTest, CheckTableSchemas) {
    CheckParams cp;
    cp.n_rho = 512;
    cp.which = "layercake";
    const CsvTable lc = check_table(cp);
    ASSERT_EQ(lc.rows.size(), 1u);
    ASSERT_EQ(lc.rows[0].size(), 15u);
    EXPECT_EQ(lc.rows[0][14], "1");  // rigorous bound holds with slack
    cp.which = "domination";
    const CsvTable dom = check_table(cp);
    EXPECT_EQ(dom.rows[0][14], "1");
    EXPECT_LE(cell_num(dom, 0, 11), 1.0 + 1e-12);  // max ratio
    cp.which = "weaklp";
    const CsvTable wl = check_table(cp);
    EXPECT_FALSE(wl.rows[0][7].empty());   // delta recorded
    EXPECT_TRUE(wl.rows[0][8].empty());    // q blank for weaklp
    cp.which = "cheb";
    const CsvTable ch = check_table(cp);
    EXPECT_FALSE(ch.rows[0][8].empty());
    cp.which = "bogus";
    EXPECT_THROW(check_table(cp), Error);
}

}  // namespace
