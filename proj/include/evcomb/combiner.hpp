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
 * The evaluable combination operator shared by the operator catalog, the
 * auditor and the evidence engine.
 */

#ifndef EVCOMB_COMBINER_HPP
#define EVCOMB_COMBINER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "generators.hpp"
#include "interval.hpp"

namespace evcomb {

/** Which family built an operator, with its numeric parameters. */
struct Provenance {
	std::string family;
	std::map< std::string, double > parameters;
};

/**
 * A binary operator on an interval with its declared identity, annihilators
 * and undefined pairs.
 *
 * Evaluation is total except on the declared undefined pairs, which raise
 * UndefinedEndpointPair. Singular points are defined but numerically delicate
 * (removable 0/0); analyses keep a margin around them.
 */
class Combiner {
public:
	using Function = std::function< double( double, double ) >;

	Combiner( Interval interval, Function fn, Provenance provenance ) :
		interval_( interval ), fn_( std::move( fn ) ), provenance_( std::move( provenance ) ) {}

	Combiner &with_identity( double e ) {
		identity_ = e;
		return *this;
	}
	Combiner &with_annihilator( double z ) {
		annihilators_.push_back( z );
		return *this;
	}
	Combiner &with_undefined_pair( double a, double b ) {
		undefined_.emplace_back( a, b );
		return *this;
	}
	Combiner &with_singular_point( double a, double b ) {
		singular_.emplace_back( a, b );
		return *this;
	}
	Combiner &with_dual_map( DualMap f ) {
		dual_.emplace( std::move( f ) );
		return *this;
	}

	const Interval &interval() const noexcept { return interval_; }
	const std::optional< double > &identity() const noexcept { return identity_; }
	const std::vector< double > &annihilators() const noexcept { return annihilators_; }
	const std::vector< std::pair< double, double > > &undefined_pairs() const noexcept { return undefined_; }
	const std::vector< std::pair< double, double > > &singular_points() const noexcept { return singular_; }
	/** Present for operators built by joining dual segments at the identity. */
	const std::optional< DualMap > &dual_map() const noexcept { return dual_; }
	const Provenance &provenance() const noexcept { return provenance_; }

	/** Undefined pairs are symmetric: (a, b) undefined makes (b, a) undefined. */
	bool defined( double a, double b ) const noexcept {
		for( const auto &[ x, y ] : undefined_ ) {
			if( ( a == x && b == y ) || ( a == y && b == x ) ) { return false; }
		}
		return true;
	}

	/** True when (a, b) is within margin (max-norm) of an undefined pair or singular point. */
	bool near_excluded( double a, double b, double margin ) const noexcept {
		auto near = [&]( const std::pair< double, double > &p ) {
			return ( std::abs( a - p.first ) <= margin && std::abs( b - p.second ) <= margin ) ||
				( std::abs( a - p.second ) <= margin && std::abs( b - p.first ) <= margin );
		};
		return std::any_of( undefined_.begin(), undefined_.end(), near ) ||
			std::any_of( singular_.begin(), singular_.end(), near );
	}

	double operator()( double a, double b ) const {
		validate_value( a, interval_ );
		validate_value( b, interval_ );
		if( !defined( a, b ) ) {
			throw Error( ErrorKind::UndefinedEndpointPair,
				provenance_.family + " at (" + detail::fmt( a ) + ", " + detail::fmt( b ) + ")" );
		}
		return fn_( a, b );
	}

private:
	Interval interval_;
	Function fn_;
	Provenance provenance_;
	std::optional< double > identity_;
	std::vector< double > annihilators_;
	std::vector< std::pair< double, double > > undefined_;
	std::vector< std::pair< double, double > > singular_;
	std::optional< DualMap > dual_;
};

} // namespace evcomb

#endif // EVCOMB_COMBINER_HPP
