#pragma once

#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/session.hpp"

namespace mac2pc {

/// Commitment used by the equality check: first kappa bits of
/// H(len || x || r).
Block eq_commitment(const BitVec& x, const Block& r, unsigned kappa);

/// Committing side: sends c = H(x || r), receives y, opens (x, r).
/// Returns x == y.
bool eq_commit_side(Session& s, const BitVec& x);

/// Responding side: receives c, sends y, receives the opening. Returns
/// true iff the opening matches c and equals y.
bool eq_respond_side(Session& s, const BitVec& y);

/// Runs the check with the given side and aborts the session on mismatch.
void eq_check(Session& s, bool committer, const BitVec& value, const char* phase);

}  // namespace mac2pc
