/*
 *   Copyright 2026 The evcomb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Accumulates certainty factors for one hypothesis with the associative
// certainty-factor rule, and shows that the order of the evidence does not
// matter while the original additive cross rule does depend on it.

#include <cstdio>
#include <vector>

#include "evcomb/evcomb.hpp"

int main() {
	using namespace evcomb;

	OperatorSpec spec;
	spec.family = Family::mycin;
	const Combiner cf = build_operator( spec );

	Ledger ledger = Ledger::start( "flu", cf );
	ledger = update( ledger, "fever", 0.6, cf );
	ledger = update( ledger, "no-cough", -0.4, cf );
	ledger = update( ledger, "contact", 0.3, cf );
	for( const auto &entry : ledger.history() ) {
		std::printf( "%-10s %+.3f -> %+.6f\n", entry.evidence.c_str(), entry.observed, entry.result );
	}

	const std::vector< double > forward{ 0.6, -0.4, 0.3 }, reverse{ 0.3, -0.4, 0.6 };
	std::printf( "forward %.15g, reverse %.15g\n", fold_evidence( cf, forward ), fold_evidence( cf, reverse ) );

	OperatorSpec original;
	original.family = Family::custom_piecewise;
	original.range = { -1.0, 1.0 };
	original.identity = 0.0;
	original.segments = { { "bernoulli", {}, {} }, { "bernoulli", {}, {} } };
	original.cross = CrossRule::additive;
	const Combiner additive = build_operator( original );
	std::printf( "additive cross rule: forward %.15g, reverse %.15g\n",
		fold_evidence( additive, forward ), fold_evidence( additive, reverse ) );
	return 0;
}
