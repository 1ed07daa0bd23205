#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace narreq {

using Rat = mpq_class;

// Exact parse of "p/q", decimal ("0.25", "-1.5") or plain integer text.
// No exponents, no hex. Returns nothing on malformed input.
std::optional<Rat> try_parse_rat(const std::string& text);

// Like try_parse_rat but throws MalformedConfig naming `what` on failure.
Rat parse_rat(const std::string& text, const std::string& what);

// Canonical exact rendering: "p/q", or plain "p" when the denominator is 1.
std::string rat_str(const Rat& x);

double rat_d(const Rat& x);

Rat rat_of(long num, long den = 1);

}  // namespace narreq
