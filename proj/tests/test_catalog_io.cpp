#include <gtest/gtest.h>

#include "metrocost/io.hpp"

using namespace metrocost;

namespace {

const CatalogEntry* single(const ModelRecord& r, Paradigm par, Strategy s, const std::string& variant = {}) {
  const CatalogEntry* e = r.find(par, s, variant);
  EXPECT_NE(e, nullptr) << r.name << " " << to_string(par) << " " << to_string(s) << " " << variant;
  return e;
}

double constant(const ModelRecord& r, Paradigm par, Strategy s, const std::string& variant = {}) {
  const CatalogEntry* e = single(r, par, s, variant);
  return e ? e->estimate.constant : std::nan("");
}

}  // namespace

TEST(Catalog, FixedAtomRows) {
  for (int p : {1, 2, 4, 8}) {
    const ModelRecord r = catalog_model("fixed_atoms", p);
    const double pd = p, pi2 = kPi * kPi;
    EXPECT_NEAR(constant(r, Paradigm::CR, Strategy::SEP), pd * pd, 1e-9);
    EXPECT_NEAR(constant(r, Paradigm::CR, Strategy::SEP_PLUS), pd, 1e-6);
    EXPECT_NEAR(constant(r, Paradigm::CR, Strategy::JNT), pd, 1e-9);
    EXPECT_NEAR(constant(r, Paradigm::MM, Strategy::SEP), pi2 * pd * pd * pd, 1e-8);
    EXPECT_NEAR(constant(r, Paradigm::MM, Strategy::SEP_PLUS), pi2 * pd * pd, 1e-5);
    EXPECT_NEAR(constant(r, Paradigm::MM, Strategy::JNT), pi2 * pd, 1e-8);
    EXPECT_EQ(single(r, Paradigm::MM, Strategy::SEP_PLUS)->estimate.status, BoundStatus::exact_asymptotic);
  }
  // No Walsh-Hadamard for p = 3: SEP+ falls back to the single-direction bound.
  EXPECT_EQ(single(catalog_model("fixed_atoms", 3), Paradigm::CR, Strategy::SEP_PLUS)->estimate.status,
            BoundStatus::lower_bound);
}

TEST(Catalog, FreeAtomRows) {
  const ModelRecord r = catalog_model("free_atoms", 3);
  const double pi2 = kPi * kPi;
  EXPECT_NEAR(constant(r, Paradigm::MM, Strategy::SEP), pi2 * 27.0, 1e-8);
  EXPECT_NEAR(constant(r, Paradigm::MM, Strategy::SEP_PLUS), pi2 * 27.0, 1e-6);
  EXPECT_NEAR(constant(r, Paradigm::CR, Strategy::JNT), 9.0, 1e-9);
  const CostEstimate& mm = single(r, Paradigm::MM, Strategy::JNT)->estimate;
  EXPECT_EQ(mm.status, BoundStatus::upper_bound);
  EXPECT_NEAR(mm.constant, ball_upper_bound(3), 1e-9);
  ASSERT_TRUE(mm.bracket_lo && mm.bracket_hi);
  EXPECT_GE(*mm.bracket_lo, 0.63 * 27.0);
  EXPECT_LE(*mm.bracket_lo, *mm.bracket_hi);
  EXPECT_NE(mm.formula.find("0.63<=c1<=1"), std::string::npos);

  const ModelRecord two = catalog_model("free_atoms", 2);
  EXPECT_NEAR(constant(two, Paradigm::MM, Strategy::JNT), 4.0 * pi2, 1e-9);
}

TEST(Catalog, PauliRows) {
  const ModelRecord p3 = catalog_model("pauli3");
  EXPECT_NEAR(constant(p3, Paradigm::CR, Strategy::SEP), 9.0, 1e-9);
  const CostEstimate& parallel = single(p3, Paradigm::CR, Strategy::JNT, "parallel")->estimate;
  EXPECT_NEAR(parallel.effective_constant(100), 9.0 * 100.0 / 102.0, 1e-12);
  EXPECT_EQ(single(p3, Paradigm::CR, Strategy::JNT, "adaptive")->source, EntrySource::cited);
  EXPECT_NEAR(constant(p3, Paradigm::CR, Strategy::JNT, "adaptive"), 3.0, 0.0);
  EXPECT_NEAR(constant(p3, Paradigm::CR, Strategy::JNT, "bound"), 3.0, 1e-8);
  EXPECT_NEAR(constant(p3, Paradigm::MM, Strategy::JNT), 4.0 * kPi * kPi, 1e-12);

  const ModelRecord p2 = catalog_model("pauli2");
  const CatalogEntry* su2 = single(p2, Paradigm::MM, Strategy::JNT);
  EXPECT_EQ(su2->source, EntrySource::cited);
  EXPECT_NEAR(su2->estimate.constant, 4.0 * std::pow(bessel_j_first_zero(0.0), 2), 1e-9);

  const ModelRecord p1 = catalog_model("pauli1");
  for (const auto& e : p1.entries) EXPECT_EQ(e.estimate.status, BoundStatus::exact_asymptotic);
  EXPECT_THROW(catalog_model("nope"), InvalidArgument);
}

TEST(Catalog, OrderingInvariantsAcrossRegistry) {
  for (int p : {4, 8}) {
    for (const ModelRecord& r : table_one(p)) {
      const double pd = r.p;
      for (Paradigm par : {Paradigm::CR, Paradigm::MM}) {
        const double sep = constant(r, par, Strategy::SEP);
        const auto jnt = best_joint_constant(r, par, 100);
        ASSERT_TRUE(jnt.has_value()) << r.name;
        const auto plus = r.find(par, Strategy::SEP_PLUS);
        if (!plus.empty()) {
          const double sp = plus.front()->estimate.constant;
          EXPECT_LE(*jnt, sp * (1.0 + 1e-9)) << r.name << " " << to_string(par);
          EXPECT_LE(sp, sep * (1.0 + 1e-9)) << r.name << " " << to_string(par);
        }
        EXPECT_LE(*jnt, sep * (1.0 + 1e-9)) << r.name;
        EXPECT_LE(sep, std::pow(pd, scaling_alpha(par)) * *jnt * (1.0 + 1e-9)) << r.name << " " << to_string(par);
      }
    }
  }
}

TEST(Catalog, TableHasSixModels) {
  const auto t = table_one();
  ASSERT_EQ(t.size(), catalog_model_names().size());
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t[i].name, catalog_model_names()[i]);
}

TEST(Figures, BallData) {
  const auto rows = figure_ball_data(20);
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_FALSE(rows[19].analytic);
  EXPECT_TRUE(rows[20].analytic && rows[21].analytic);
  EXPECT_NEAR(rows[20].analytic_norm, kPi * kPi, 1e-12);
  EXPECT_NEAR(rows[21].analytic_norm, kPi * kPi / 2.0, 1e-12);
  for (int i = 1; i < 20; ++i) EXPECT_LT(rows[i].ball_norm, rows[i - 1].ball_norm);
  EXPECT_THROW(figure_ball_data(1), InvalidArgument);
  EXPECT_THROW(figure_ball_data(65), ResourceLimitError);
}

TEST(Figures, RatioData) {
  const auto rows = figure_ratio_data(1.0, uniform_beta_grid(1.0, 50), 180);
  ASSERT_EQ(rows.size(), 50u);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].ratio, 1.0 - 1e-12);
    if (rows[i].ratio > rows[peak].ratio) peak = i;
  }
  EXPECT_GT(peak, 0u);
  EXPECT_LT(peak, rows.size() - 1);
  for (std::size_t i = 1; i <= peak; ++i) EXPECT_GE(rows[i].ratio, rows[i - 1].ratio - 1e-9);
  for (std::size_t i = peak + 1; i < rows.size(); ++i) EXPECT_LE(rows[i].ratio, rows[i - 1].ratio + 1e-9);
  EXPECT_LT(rows.back().ratio, rows[peak].ratio);
  EXPECT_THROW(figure_ratio_data(1.0, {1.5}), InvalidArgument);
}

TEST(Io, CostEstimateRoundTrip) {
  for (const ModelRecord& r : table_one(4)) {
    for (const auto& e : r.entries) {
      const Json j = Json::parse(to_json(e, 100).dump());
      const CostEstimate back = cost_estimate_from_json(j);
      EXPECT_EQ(to_json(back, 100), to_json(e.estimate, 100)) << r.name;
      EXPECT_EQ(j.at("source"), to_string(e.source));
    }
  }
}

TEST(Io, NonFiniteNumbersAndMatrices) {
  RMatrix m(2, 2);
  m << 1.5, kInf, -kInf, 0.1;
  const Json j = Json::parse(matrix_to_json(m).dump());
  EXPECT_EQ(j[0][1], "inf");
  EXPECT_EQ(j[1][0], "-inf");
  const RMatrix back = matrix_from_json(j);
  EXPECT_EQ(back(0, 0), 1.5);
  EXPECT_EQ(back(1, 1), 0.1);
  EXPECT_EQ(back(0, 1), kInf);
  EXPECT_TRUE(std::isnan(number_from_json(json_number(std::nan("")))));
  EXPECT_THROW(number_from_json(Json("x")), InvalidArgument);
  EXPECT_THROW(matrix_from_json(Json::parse("[[1,2],[3]]")), InvalidArgument);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Io, CsvQuotingAndLineEndings) {
  CsvTable t({"a", "b"});
  t.add_row({"x,y", "say \"hi\""});
  EXPECT_EQ(t.str(), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
  EXPECT_THROW(t.add_row({"only one"}), InvalidArgument);
}

TEST(Io, SpectrumJson) {
  const SimplexSpectrum s = simplex_ground_energy(1, 32);
  const Json j = to_json(s);
  EXPECT_EQ(j.at("p"), 1);
  EXPECT_DOUBLE_EQ(j.at("E").get<double>(), s.E);
  EXPECT_LT(j.at("relative_residual").get<double>(), 1e-9);
}
