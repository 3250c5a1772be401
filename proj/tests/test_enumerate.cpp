#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>

#include "hnc/enumerate.hpp"
#include "hnc/minimality.hpp"

using namespace hnc;

TEST_CASE("catalog counts")
{
    struct Row {
        int k, l;
        std::size_t count;
        std::uint64_t labeled;
    };
    for (Row r : {Row{1, 1, 1, 1}, Row{1, 2, 4, 7}, Row{2, 1, 1, 1}, Row{3, 1, 9, 31}, Row{2, 2, 333, 1270}}) {
        CAPTURE(r.k);
        CAPTURE(r.l);
        auto res = enumerate_networks(r.k, r.l);
        CHECK(res.networks.size() == r.count);
        CHECK(res.labeled_count == r.labeled);
    }
}

TEST_CASE("every listed network is canonical, minimal and distinct")
{
    for (auto [k, l] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{3, 1}}) {
        auto res = enumerate_networks(k, l);
        std::set<std::string> keys;
        for (std::size_t i = 0; i < res.networks.size(); ++i) {
            const auto& e = res.networks[i];
            CHECK(validate(e.net).ok());
            CHECK(is_minimal(e.net));
            CHECK(canonicalize(e.net).canonical == e.net);
            CHECK(e.orbit_size == orbit_size(e.net));
            CHECK(e.stabilizer_order * e.orbit_size == factorial(k) * factorial(l));
            CHECK(keys.insert(render(e.net)).second);
            if (i) CHECK(network_less(res.networks[i - 1].net, e.net));
        }
    }
}

TEST_CASE("without the source relay rule")
{
    EnumerateOptions opt;
    opt.catalog_rule = false;
    auto res = enumerate_networks(1, 2, opt);
    CHECK(res.networks.size() == 6);
    CHECK(res.labeled_count == 11);
}

TEST_CASE("IDSC catalog")
{
    EnumerateOptions opt;
    opt.idsc = true;
    for (auto [k, l, count] : {std::tuple{2, 2, 4}, std::tuple{2, 3, 33}, std::tuple{3, 2, 3}}) {
        auto res = enumerate_networks(k, l, opt);
        CHECK(res.networks.size() == static_cast<std::size_t>(count));
        for (const auto& e : res.networks) {
            for (const auto& d : e.net.q) CHECK(d.in == e.net.sources());
            for (const auto& d : e.net.w) CHECK((d.in & e.net.sources()) == 0);
        }
    }
}

TEST_CASE("checkpoint and resume")
{
    auto path = (std::filesystem::temp_directory_path() / "hnc_enum_checkpoint.json").string();
    std::filesystem::remove(path);
    auto full = enumerate_networks(2, 2);

    // Interrupt after the third save, as a killed process would be.
    EnumerateOptions opt;
    opt.checkpoint_path = path;
    opt.checkpoint_every = 50;
    int saves = 0;
    opt.progress = [&](const std::string&) {
        if (++saves == 3) throw std::runtime_error("interrupted");
    };
    CHECK_THROWS_AS(enumerate_networks(2, 2, opt), std::runtime_error);
    REQUIRE(std::filesystem::exists(path));

    opt.progress = nullptr;
    auto resumed = enumerate_networks(2, 2, opt);
    REQUIRE(resumed.networks.size() == full.networks.size());
    for (std::size_t i = 0; i < full.networks.size(); ++i) CHECK(resumed.networks[i].net == full.networks[i].net);
    CHECK(resumed.labeled_count == 1270);
    CHECK(resumed.candidates == full.candidates);

    CHECK_THROWS(enumerate_networks(2, 1, opt));  // the file belongs to (2,2)
    std::filesystem::remove(path);
}

TEST_CASE("smallest canonicals")
{
    auto s = smallest_canonicals();
    REQUIRE(s.size() == 6);
    CHECK(s[0].k == 1);
    CHECK(s[0].l == 1);
    CHECK(s[5].k == 2);
}
