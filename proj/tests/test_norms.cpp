#include "doctest.h"

#include <random>
#include <unordered_map>

#include "helpers.hpp"
#include "psynorms/error.hpp"
#include "psynorms/norms.hpp"

using namespace psynorms;
using testing::TempDir;

namespace {

NormDataset make(PropertyKind p, LikertScale s, std::initializer_list<std::pair<const char*, double>> rows)
{
    NormDataset ds{p, s, {}};
    for (auto [w, r] : rows)
        ds.records.push_back({w, r, "test"});
    return ds;
}

std::unordered_map<std::string, double> as_map(const NormDataset& ds)
{
    std::unordered_map<std::string, double> m;
    for (const auto& r : ds.records)
        m[r.word] = r.rating;
    return m;
}

const LikertScale seven(1, 7);
const LikertScale nine(1, 9);

} // namespace

TEST_CASE("load_norms parses, normalizes and validates")
{
    TempDir dir;
    SUBCASE("two rows")
    {
        auto ds = load_norms(dir.write("a.csv", "word,rating\ncasa,6.5\nideia,2.1\n"), PropertyKind::Concreteness, seven);
        REQUIRE(ds.size() == 2);
        CHECK(ds.records[0].word == "casa");
        CHECK(ds.records[0].rating == 6.5);
        CHECK(ds.records[1].rating == 2.1);
        CHECK(ds.records[0].source == "a");
    }
    SUBCASE("out of range")
    {
        CHECK_THROWS_AS(load_norms(dir.write("a.csv", "word,rating\ncasa,9.5\n"), PropertyKind::Concreteness, seven),
                        DataError);
    }
    SUBCASE("duplicate word")
    {
        CHECK_THROWS_WITH_AS(
            load_norms(dir.write("a.csv", "word,rating\ncasa,6.5\ncasa,6.0\n"), PropertyKind::Concreteness, seven),
            doctest::Contains("duplicate"), DataError);
    }
    SUBCASE("duplicate after case folding")
    {
        CHECK_THROWS_AS(load_norms(dir.write("a.csv", "word,rating\nCasa,6.5\ncasa,6.0\n"), PropertyKind::Concreteness, seven),
                        DataError);
    }
    SUBCASE("malformed row reports the line")
    {
        CHECK_THROWS_WITH_AS(
            load_norms(dir.write("a.csv", "word,rating\ncasa,6.5\nsol,abc\n"), PropertyKind::Concreteness, seven),
            doctest::Contains(":3:"), DataError);
    }
    SUBCASE("comma decimal separator is rejected")
    {
        CHECK_THROWS_AS(load_norms(dir.write("a.csv", "word,rating\ncasa,6,5\n"), PropertyKind::Concreteness, seven),
                        DataError);
    }
    SUBCASE("missing header")
    {
        CHECK_THROWS_AS(load_norms(dir.write("a.csv", "casa,6.5\n"), PropertyKind::Concreteness, seven), DataError);
    }
    SUBCASE("NFC, lowercase, trim")
    {
        // "AÇÃO" written with combining marks (C + U+0327, A + U+0303)
        auto ds = load_norms(dir.write("a.csv", "word,rating\n  AC\xCC\xA7" "A\xCC\x83O ,5\n"), PropertyKind::Concreteness,
                             seven);
        CHECK(ds.records[0].word == "ação");
    }
    SUBCASE("word with inner whitespace")
    {
        CHECK_THROWS_AS(load_norms(dir.write("a.csv", "word,rating\nfim de,5\n"), PropertyKind::Concreteness, seven),
                        DataError);
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_AS(load_norms(dir / "nope.csv", PropertyKind::Concreteness, seven), DataError);
    }
}

TEST_CASE("LikertScale rejects degenerate ranges")
{
    CHECK_THROWS_AS(LikertScale(3, 3), DataError);
    CHECK_THROWS_AS(LikertScale(7, 1), DataError);
    CHECK(LikertScale::parse("1-9") == nine);
    CHECK_THROWS_AS(LikertScale::parse("1to9"), UsageError);
}

TEST_CASE("convert_scale maps endpoints and midpoint")
{
    auto ds = make(PropertyKind::AgeOfAcquisition, nine, {{"a", 1.0}, {"b", 9.0}, {"c", 5.0}});
    auto out = convert_scale(ds, seven);
    CHECK(out.scale == seven);
    CHECK(out.records[0].rating == 1.0);
    CHECK(out.records[1].rating == 7.0);
    CHECK(out.records[2].rating == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(convert_scale(NormDataset{PropertyKind::AgeOfAcquisition, nine, {}}, seven), DataError);
}

TEST_CASE("convert_scale is affine and identity on the same scale")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(1.0, 9.0);
    for (int t = 0; t < 500; ++t) {
        double r[3] = {u(gen), u(gen), u(gen)};
        std::sort(r, r + 3);
        if (r[2] - r[0] < 1e-6)
            continue;
        auto ds = make(PropertyKind::AgeOfAcquisition, nine, {{"a", r[0]}, {"b", r[1]}, {"c", r[2]}});
        auto out = convert_scale(ds, seven);
        const double before = (r[1] - r[0]) / (r[2] - r[0]);
        const double after = (out.records[1].rating - out.records[0].rating) /
                             (out.records[2].rating - out.records[0].rating);
        CHECK(std::abs(before - after) <= 1e-12);

        auto same = convert_scale(ds, nine);
        for (int i = 0; i < 3; ++i)
            CHECK(same.records[i].rating == ds.records[i].rating);
    }
}

TEST_CASE("apply_orthography")
{
    const auto map = starter_orthography_map();
    SUBCASE("replacement")
    {
        auto out = apply_orthography(make(PropertyKind::Concreteness, seven, {{"acção", 5.0}}), map);
        REQUIRE(out.size() == 1);
        CHECK(out.records[0].word == "ação");
        CHECK(out.records[0].rating == 5.0);
    }
    SUBCASE("discard")
    {
        auto out = apply_orthography(make(PropertyKind::Concreteness, seven, {{"faneca", 3.0}, {"sol", 6.0}}), map);
        REQUIRE(out.size() == 1);
        CHECK(out.records[0].word == "sol");
    }
    SUBCASE("empty map is identity")
    {
        auto ds = make(PropertyKind::Concreteness, seven, {{"acção", 5.0}, {"faneca", 3.0}});
        auto out = apply_orthography(ds, OrthographyMap{});
        CHECK(as_map(out) == as_map(ds));
    }
    SUBCASE("collision averages")
    {
        auto out = apply_orthography(make(PropertyKind::Concreteness, seven, {{"ação", 6.0}, {"acção", 4.0}}), map);
        REQUIRE(out.size() == 1);
        CHECK(out.records[0].word == "ação");
        CHECK(out.records[0].rating == 5.0);
    }
    SUBCASE("never increases the record count")
    {
        std::mt19937_64 gen(3);
        const char* pool[] = {"acção", "ação", "faneca", "faia", "sol", "lua", "ficheiro", "arquivo", "amnistia"};
        for (int t = 0; t < 200; ++t) {
            NormDataset ds{PropertyKind::Concreteness, seven, {}};
            std::unordered_set<std::string> used;
            for (const char* w : pool)
                if (gen() % 2 && used.insert(w).second)
                    ds.records.push_back({w, 1.0 + static_cast<double>(gen() % 6), "t"});
            CHECK(apply_orthography(ds, map).size() <= ds.size());
        }
    }
}

TEST_CASE("OrthographyMap invariants and file format")
{
    OrthographyMap m;
    m.add_replacement("acção", "ação");
    CHECK_THROWS_AS(m.add_discard("acção"), DataError);
    m.add_discard("faia");
    CHECK_THROWS_AS(m.add_replacement("faia", "faia-bp"), DataError);
    CHECK_THROWS_AS(m.add_replacement("x", "duas palavras"), DataError);

    TempDir dir;
    auto loaded = load_orthography_map(dir.write("m.csv", "ep_form,bp_form\n# comment\nacção,ação\nfaneca,\n"));
    CHECK(loaded.replacements().at("acção") == "ação");
    CHECK(loaded.discards().contains("faneca"));
    CHECK_THROWS_AS(load_orthography_map(dir.write("bad.csv", "ep_form,bp_form\nfaia,\nfaia,faya\n")), DataError);
}

TEST_CASE("merge_datasets")
{
    SUBCASE("disjoint union")
    {
        auto m = merge_datasets(make(PropertyKind::Concreteness, seven, {{"sol", 6}}),
                                make(PropertyKind::Concreteness, seven, {{"lua", 5}}));
        CHECK(as_map(m) == std::unordered_map<std::string, double>{{"sol", 6}, {"lua", 5}});
    }
    SUBCASE("shared word averages")
    {
        auto m = merge_datasets(make(PropertyKind::Concreteness, seven, {{"sol", 6}}),
                                make(PropertyKind::Concreteness, seven, {{"sol", 4}}));
        CHECK(as_map(m) == std::unordered_map<std::string, double>{{"sol", 5}});
    }
    SUBCASE("mismatches")
    {
        CHECK_THROWS_AS(merge_datasets(make(PropertyKind::Concreteness, seven, {{"a", 1}}),
                                       make(PropertyKind::Imageability, seven, {{"a", 1}})),
                        DataError);
        CHECK_THROWS_AS(merge_datasets(make(PropertyKind::AgeOfAcquisition, seven, {{"a", 1}}),
                                       make(PropertyKind::AgeOfAcquisition, nine, {{"a", 1}})),
                        DataError);
    }
    SUBCASE("AoA source sizes")
    {
        NormDataset a{PropertyKind::AgeOfAcquisition, seven, {}}, b{PropertyKind::AgeOfAcquisition, seven, {}};
        for (std::size_t i = 0; i < 765; ++i)
            a.records.push_back({testing::synthetic_word(i), 3.0, "a"});
        for (std::size_t i = 765 - 114; i < 765 - 114 + 1717; ++i)
            b.records.push_back({testing::synthetic_word(i), 4.0, "b"});
        CHECK(merge_datasets(a, b).size() == 2368);
    }
}

TEST_CASE("merge is commutative and keeps words unique")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(1.0, 7.0);
    for (int t = 0; t < 100; ++t) {
        NormDataset a{PropertyKind::Imageability, seven, {}}, b{PropertyKind::Imageability, seven, {}};
        for (std::size_t i = 0; i < 40; ++i) {
            if (gen() % 2)
                a.records.push_back({testing::synthetic_word(i), u(gen), "a"});
            if (gen() % 2)
                b.records.push_back({testing::synthetic_word(i), u(gen), "b"});
        }
        const auto ab = merge_datasets(a, b);
        const auto ba = merge_datasets(b, a);
        CHECK(ab.size() <= a.size() + b.size());
        CHECK(as_map(ab).size() == ab.size());
        const auto mab = as_map(ab), mba = as_map(ba);
        REQUIRE(mab.size() == mba.size());
        for (const auto& [w, r] : mab)
            CHECK(std::abs(r - mba.at(w)) <= 1e-12);
    }
}

TEST_CASE("write_norms round-trips")
{
    TempDir dir;
    auto ds = make(PropertyKind::Concreteness, seven, {{"sol", 6.123456789012345}, {"ação", 1.0 + 1.0 / 3.0}});
    write_norms(ds, dir / "out.csv");
    auto back = load_norms(dir / "out.csv", PropertyKind::Concreteness, seven);
    CHECK(as_map(back) == as_map(ds));
    CHECK(back.records[0].word == "ação"); // sorted
}
