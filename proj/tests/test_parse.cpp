// Copyright 2026 The facenum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "facenum/llm/parse.hpp"

using namespace facenum;

TEST_CASE("verdict parsing takes the first standalone yes/no token") {
    CHECK(parse_verdict("YES, it is a toilet") == Verdict::Yes);
    CHECK(parse_verdict("The answer is no.") == Verdict::No);
    CHECK(parse_verdict("facing north, yes") == Verdict::Yes);  // 'north' is not a 'no'
    CHECK(parse_verdict("No - the door opens to a hallway") == Verdict::No);
    CHECK(parse_verdict("Notably, yes") == Verdict::Yes);
    CHECK(parse_verdict("yes and no") == Verdict::Yes);
}

TEST_CASE("verdict parsing fails when neither token occurs") {
    CHECK_THROWS_AS(parse_verdict("maybe"), ParseError);
    CHECK_THROWS_AS(parse_verdict(""), ParseError);
    CHECK_THROWS_AS(parse_verdict("north-facing nothing"), ParseError);
    try {
        parse_verdict("unclear reply");
    } catch (const ParseError& e) {
        CHECK(e.raw_text == "unclear reply");
    }
}

TEST_CASE("count parsing reads digits and the number words zero..ten") {
    CHECK(parse_count("There are 2 missing toilets") == 2);
    CHECK(parse_count("zero missing instances") == 0);
    CHECK(parse_count("I count three more, maybe 4") == 3);
    CHECK(parse_count("ten") == 10);
    CHECK(parse_count("answer: 12") == 12);
}

TEST_CASE("count parsing skips negatives and rejects unusable text") {
    CHECK_THROWS_AS(parse_count("I see none"), ParseError);  // 'none' deliberately unmapped
    CHECK_THROWS_AS(parse_count("-1"), ParseError);
    CHECK_THROWS_AS(parse_count("minus things"), ParseError);
    CHECK(parse_count("-1 at first glance, but actually 2") == 2);
    CHECK(parse_count("room-2 has 5") == 2);  // hyphenated compound is not a negative
}

TEST_CASE("reason extraction returns the text after the marker") {
    CHECK(extract_reason("Yes. Reason: the WC symbol is visible") ==
          "the WC symbol is visible");
    CHECK(extract_reason("no particular marker here") == "");
    CHECK(extract_reason("YES - reason: small room, swing door") ==
          "small room, swing door");
}
