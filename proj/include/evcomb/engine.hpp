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

/**
 * @file
 *
 * Folding evidence through a combiner: F_m(a_1..a_m) = F_2(F_{m-1}(a_1..a_{m-1}), a_m),
 * incremental ledgers, and batch evaluation of hypotheses.
 */

#ifndef EVCOMB_ENGINE_HPP
#define EVCOMB_ENGINE_HPP

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "combiner.hpp"
#include "error.hpp"
#include "operators.hpp"

namespace evcomb {

/** Left fold in input order; the empty fold is the identity. */
inline double fold_evidence( const Combiner &c, std::span< const double > values ) {
	for( const double v : values ) { validate_value( v, c.interval() ); }
	if( values.empty() ) {
		if( !c.identity() ) {
			throw Error( ErrorKind::NoIdentityForEmptyFold, c.provenance().family + " has no identity" );
		}
		return *c.identity();
	}
	double acc = values.front();
	for( const double v : values.subspan( 1 ) ) { acc = c( acc, v ); }
	return acc;
}

struct LedgerEntry {
	std::string evidence;
	double observed;
	double result;
};

/** Running evaluation of one hypothesis. Ledgers are values; update returns a new one. */
class Ledger {
public:
	/** Starts at the combiner's identity. */
	static Ledger start( std::string hypothesis, const Combiner &c ) {
		if( !c.identity() ) {
			throw Error( ErrorKind::NoIdentityForEmptyFold, c.provenance().family + " has no identity" );
		}
		return Ledger( std::move( hypothesis ), *c.identity() );
	}

	static Ledger starting_at( std::string hypothesis, double value, const Combiner &c ) {
		validate_value( value, c.interval() );
		return Ledger( std::move( hypothesis ), value );
	}

	const std::string &hypothesis() const noexcept { return hypothesis_; }
	double initial() const noexcept { return initial_; }
	double current() const noexcept { return current_; }
	const std::vector< LedgerEntry > &history() const noexcept { return history_; }

	/** Recomputes the current value from the initial value and the history. */
	double replay( const Combiner &c ) const {
		double acc = initial_;
		for( const auto &entry : history_ ) { acc = c( acc, entry.observed ); }
		return acc;
	}

private:
	Ledger( std::string hypothesis, double initial ) :
		hypothesis_( std::move( hypothesis ) ), initial_( initial ), current_( initial ) {}
	friend Ledger update( const Ledger &, const std::string &, double, const Combiner & );

	std::string hypothesis_;
	double initial_;
	double current_;
	std::vector< LedgerEntry > history_;
};

inline Ledger update( const Ledger &ledger, const std::string &evidence, double value, const Combiner &c ) {
	validate_value( value, c.interval() );
	Ledger next = ledger;
	next.current_ = c( ledger.current_, value );
	next.history_.push_back( { evidence, value, next.current_ } );
	return next;
}

/** One hypothesis: the singleton evaluations B({e_i}) of its evidence and its operator. */
struct HypothesisModel {
	std::string id;
	std::map< std::string, double > base;
	OperatorSpec op;
};

struct TraceEntry {
	std::string evidence;
	double value;
	double running;
};

struct HypothesisResult {
	std::string id;
	double value;
	std::size_t count;
	std::vector< TraceEntry > trace;
};

/**
 * Folds the base evaluations of each hypothesis' observed evidence, in the
 * order observed. observed[i] belongs to models[i]. Results are sorted by id.
 */
inline std::vector< HypothesisResult > evaluate_batch(
	const std::vector< HypothesisModel > &models,
	const std::vector< std::vector< std::string > > &observed
) {
	if( observed.size() != models.size() ) {
		throw Error( ErrorKind::OutOfRange, "one observation list per hypothesis expected" );
	}
	std::vector< HypothesisResult > results;
	results.reserve( models.size() );
	for( std::size_t i = 0; i < models.size(); ++i ) {
		const HypothesisModel &model = models[ i ];
		const Combiner c = build_operator( model.op );
		for( const auto &[ id, v ] : model.base ) {
			if( !c.interval().contains( v ) ) {
				throw Error( ErrorKind::OutOfRange,
					model.id + "/" + id + " = " + detail::fmt( v ) + " not in " + c.interval().str() );
			}
		}
		HypothesisResult r{ model.id, 0.0, 0, {} };
		std::vector< double > values;
		for( const auto &ev : observed[ i ] ) {
			const auto it = model.base.find( ev );
			if( it == model.base.end() ) {
				throw Error( ErrorKind::UnknownEvidenceId, model.id + "/" + ev );
			}
			values.push_back( it->second );
			r.value = values.size() == 1 ? it->second : c( r.value, it->second );
			r.trace.push_back( { ev, it->second, r.value } );
		}
		if( values.empty() ) { r.value = fold_evidence( c, values ); }
		r.count = values.size();
		results.push_back( std::move( r ) );
	}
	std::stable_sort( results.begin(), results.end(),
		[]( const HypothesisResult &x, const HypothesisResult &y ) { return x.id < y.id; } );
	return results;
}

} // namespace evcomb

#endif // EVCOMB_ENGINE_HPP
