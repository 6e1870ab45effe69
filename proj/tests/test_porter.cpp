#include <fstream>
#include <string>

#include "doctest.h"
#include "entangle/porter_stemmer.hpp"
#include "test_support.hpp"

using entangle::porter_stem;

TEST_CASE("porter: classic examples") {
    CHECK(porter_stem("caresses") == "caress");
    CHECK(porter_stem("ponies") == "poni");
    CHECK(porter_stem("cats") == "cat");
    CHECK(porter_stem("growled") == "growl");
    CHECK(porter_stem("hopping") == "hop");
    CHECK(porter_stem("filing") == "file");
    CHECK(porter_stem("relational") == "relat");
    CHECK(porter_stem("generalizations") == "gener");
    CHECK(porter_stem("sky") == "sky");
    CHECK(porter_stem("") == "");
}

TEST_CASE("porter: matches reference vectors") {
    std::ifstream in(testing::source_dir() / "tests" / "data" / "porter_vectors.tsv");
    REQUIRE(in);
    std::string line;
    std::size_t n = 0, mismatches = 0;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        const auto word = line.substr(0, tab);
        const auto want = line.substr(tab + 1);
        const auto got = porter_stem(word);
        if (got != want) {
            ++mismatches;
            if (mismatches <= 10) MESSAGE(word << ": got " << got << ", want " << want);
        }
        ++n;
    }
    CHECK(n > 5000);
    CHECK(mismatches == 0);
}
