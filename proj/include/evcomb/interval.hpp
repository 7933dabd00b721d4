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
 * Evaluation ranges, basic segments and the idempotent structure of a
 * combination operator, together with the rules that idempotents force.
 *
 * A value e is the identity (a*e = a), a value z an annihilator (a*z = z),
 * and any u with u*u = u an idempotent. Consecutive idempotents delimit basic
 * segments. On the positive side of e a segment has its lower endpoint as
 * identity and its upper endpoint as annihilator; the negative side mirrors
 * that. Two same-side points separated by an idempotent combine to their max
 * (positive side) or min (negative side).
 */

#ifndef EVCOMB_INTERVAL_HPP
#define EVCOMB_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace evcomb {

/** Two idempotents closer than this are the same point. */
inline constexpr double idempotent_dedup_eps = 1e-9;

namespace detail {

	inline std::string fmt( double x ) {
		std::ostringstream os;
		os.precision( 17 );
		os << x;
		return os.str();
	}

} // namespace detail

/** A closed range [lo, hi] of evaluation values. */
class Interval {
public:
	Interval( double lo, double hi ) : lo_( lo ), hi_( hi ) {
		if( !std::isfinite( lo ) || !std::isfinite( hi ) || !( lo < hi ) ) {
			throw Error( ErrorKind::InvalidInterval,
				"[" + detail::fmt( lo ) + ", " + detail::fmt( hi ) + "]" );
		}
	}

	double lo() const noexcept { return lo_; }
	double hi() const noexcept { return hi_; }
	double width() const noexcept { return hi_ - lo_; }

	bool contains( double x ) const noexcept { return lo_ <= x && x <= hi_; }
	double clamp( double x ) const noexcept { return std::clamp( x, lo_, hi_ ); }

	std::string str() const {
		return "[" + detail::fmt( lo_ ) + ", " + detail::fmt( hi_ ) + "]";
	}

	friend bool operator==( const Interval &, const Interval & ) = default;

private:
	double lo_;
	double hi_;
};

/** A real evaluation known to lie inside its interval. */
class EvaluationValue {
public:
	double value() const noexcept { return v_; }
	const Interval &interval() const noexcept { return interval_; }
	operator double() const noexcept { return v_; }

private:
	EvaluationValue( double v, Interval interval ) : v_( v ), interval_( interval ) {}
	friend EvaluationValue validate_value( double x, const Interval &interval );

	double v_;
	Interval interval_;
};

inline EvaluationValue validate_value( double x, const Interval &interval ) {
	if( !interval.contains( x ) ) {
		throw Error( ErrorKind::OutOfRange, detail::fmt( x ) + " not in " + interval.str() );
	}
	return EvaluationValue( x, interval );
}

enum class Side { positive, negative };
enum class End { lo, hi };

/**
 * A basic segment. The side fixes the orientation: a positive segment has its
 * identity at lo and annihilator at hi, a negative segment the reverse.
 */
class Segment {
public:
	Segment( double lo, double hi, Side side ) : lo_( lo ), hi_( hi ), side_( side ) {
		if( !std::isfinite( lo ) || !std::isfinite( hi ) || !( lo < hi ) ) {
			throw Error( ErrorKind::InvalidInterval,
				"segment [" + detail::fmt( lo ) + ", " + detail::fmt( hi ) + "]" );
		}
	}

	double lo() const noexcept { return lo_; }
	double hi() const noexcept { return hi_; }
	Side side() const noexcept { return side_; }
	End identity_end() const noexcept { return side_ == Side::positive ? End::lo : End::hi; }
	End annihilator_end() const noexcept { return side_ == Side::positive ? End::hi : End::lo; }
	double identity() const noexcept { return side_ == Side::positive ? lo_ : hi_; }
	double annihilator() const noexcept { return side_ == Side::positive ? hi_ : lo_; }
	bool contains( double x ) const noexcept { return lo_ <= x && x <= hi_; }
	double clamp( double x ) const noexcept { return std::clamp( x, lo_, hi_ ); }

	std::string str() const {
		return std::string( side_ == Side::positive ? "+" : "-" ) + "[" + detail::fmt( lo_ ) +
			", " + detail::fmt( hi_ ) + "]";
	}

	friend bool operator==( const Segment &, const Segment & ) = default;

private:
	double lo_;
	double hi_;
	Side side_;
};

/** The idempotents of an operator on an interval and the segments they delimit. */
class SegmentStructure {
public:
	const Interval &interval() const noexcept { return interval_; }
	double identity() const noexcept { return e_; }
	/** Strictly increasing; contains lo, e and hi. */
	const std::vector< double > &idempotents() const noexcept { return idempotents_; }
	const std::vector< Segment > &segments() const noexcept { return segments_; }

	bool two_sided() const noexcept { return interval_.lo() < e_ && e_ < interval_.hi(); }

	/** e belongs to both sides. */
	bool same_side( double a, double b ) const noexcept {
		return ( a >= e_ && b >= e_ ) || ( a <= e_ && b <= e_ );
	}

	/**
	 * Index of a segment holding both a and b, or -1. Boundary points belong to
	 * both neighbours; the lower-indexed segment wins.
	 */
	int segment_of( double a, double b ) const noexcept {
		for( std::size_t i = 0; i < segments_.size(); ++i ) {
			if( segments_[ i ].contains( a ) && segments_[ i ].contains( b ) ) {
				return static_cast< int >( i );
			}
		}
		return -1;
	}

	/** True when some idempotent u satisfies min(a,b) <= u <= max(a,b). */
	bool separated( double a, double b ) const noexcept {
		const double l = std::min( a, b ), h = std::max( a, b );
		const auto it = std::lower_bound( idempotents_.begin(), idempotents_.end(), l );
		return it != idempotents_.end() && *it <= h;
	}

private:
	SegmentStructure( Interval interval, double e ) : interval_( interval ), e_( e ) {}
	friend SegmentStructure build_segment_structure(
		const Interval &, double, const std::vector< double > & );

	Interval interval_;
	double e_;
	std::vector< double > idempotents_;
	std::vector< Segment > segments_;
};

/**
 * Sorts the idempotents (inserting lo, e and hi) and derives the tiling.
 * Interior idempotents closer than idempotent_dedup_eps to any other point
 * are rejected as duplicates.
 */
inline SegmentStructure build_segment_structure(
	const Interval &interval, double identity_e,
	const std::vector< double > &interior_idempotents
) {
	if( !interval.contains( identity_e ) ) {
		throw Error( ErrorKind::IdentityOutsideInterval,
			detail::fmt( identity_e ) + " not in " + interval.str() );
	}
	std::vector< double > points{ interval.lo(), identity_e, interval.hi() };
	std::sort( points.begin(), points.end() );
	points.erase( std::unique( points.begin(), points.end() ), points.end() );

	for( const double u : interior_idempotents ) {
		if( !interval.contains( u ) ) {
			throw Error( ErrorKind::OutOfRange,
				"idempotent " + detail::fmt( u ) + " not in " + interval.str() );
		}
		for( const double p : points ) {
			if( std::abs( p - u ) < idempotent_dedup_eps ) {
				throw Error( ErrorKind::DuplicateIdempotent, detail::fmt( u ) );
			}
		}
		points.insert( std::upper_bound( points.begin(), points.end(), u ), u );
	}

	SegmentStructure out( interval, identity_e );
	out.idempotents_ = points;
	for( std::size_t i = 0; i + 1 < points.size(); ++i ) {
		const Side side = points[ i ] >= identity_e ? Side::positive : Side::negative;
		out.segments_.emplace_back( points[ i ], points[ i + 1 ], side );
	}
	return out;
}

/** max on the positive side, min on the negative side, when an idempotent separates a and b. */
inline double idempotent_separated_combine( double a, double b, const SegmentStructure &structure ) {
	validate_value( a, structure.interval() );
	validate_value( b, structure.interval() );
	if( !structure.same_side( a, b ) ) {
		throw Error( ErrorKind::CrossSide, detail::fmt( a ) + ", " + detail::fmt( b ) );
	}
	if( !structure.separated( a, b ) ) {
		throw Error( ErrorKind::NotSeparated, detail::fmt( a ) + ", " + detail::fmt( b ) );
	}
	return ( a >= structure.identity() && b >= structure.identity() ) ? std::max( a, b )
	                                                                 : std::min( a, b );
}

/** The only rule when every point is idempotent: max above e, min below. */
inline double all_idempotent_combine( double a, double b, const SegmentStructure &structure ) {
	validate_value( a, structure.interval() );
	validate_value( b, structure.interval() );
	if( !structure.same_side( a, b ) ) {
		throw Error( ErrorKind::CrossSide, detail::fmt( a ) + ", " + detail::fmt( b ) );
	}
	return ( a >= structure.identity() && b >= structure.identity() ) ? std::max( a, b )
	                                                                 : std::min( a, b );
}

} // namespace evcomb

#endif // EVCOMB_INTERVAL_HPP
