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
 * Order-isomorphisms that generate combination rules.
 *
 * A Generator maps a basic segment onto [0, inf] under addition (no interior
 * nilpotents) or onto [0, 1] under the bounded sum min{s + t, 1} (nilpotent
 * case). The rule on the segment is the transport a * b = h^-1(h(a) . h(b)).
 *
 * A SignedGenerator joins a positive segment and its negative dual at the
 * common identity e through a dual map f with a * f(a) = e:
 *     g(a) = h(a) for a >= e,   g(a) = -h(f(a)) for a < e,
 * and a * b = g^-1(g(a) + g(b)) on the whole interval except for the pair of
 * opposite endpoints, which stays undefined.
 */

#ifndef EVCOMB_GENERATORS_HPP
#define EVCOMB_GENERATORS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "interval.hpp"

namespace evcomb {

inline constexpr double bisection_tolerance = 1e-13;
inline constexpr unsigned bisection_max_iterations = 200;

/**
 * Inverts a monotone map on [lo, hi] by bisection. The map may be increasing
 * or decreasing and may take infinite values at the bracket ends.
 */
template< typename Map >
double invert_monotone(
	const Map &map, double target, double lo, double hi,
	double tolerance = bisection_tolerance,
	unsigned max_iterations = bisection_max_iterations
) {
	const double f_lo = map( lo ), f_hi = map( hi );
	const bool increasing = f_lo <= f_hi;
	const double min_image = increasing ? f_lo : f_hi;
	const double max_image = increasing ? f_hi : f_lo;
	if( std::isnan( target ) || target < min_image || target > max_image ) {
		throw Error( ErrorKind::TargetNotBracketed,
			detail::fmt( target ) + " outside [" + detail::fmt( min_image ) + ", " +
			detail::fmt( max_image ) + "]" );
	}
	if( f_lo == target ) { return lo; }
	if( f_hi == target ) { return hi; }
	unsigned iter = 0;
	while( hi - lo > tolerance ) {
		if( iter++ == max_iterations ) {
			throw Error( ErrorKind::NoConvergence,
				"bracket width " + detail::fmt( hi - lo ) + " after " +
				std::to_string( max_iterations ) + " iterations" );
		}
		const double mid = lo + ( hi - lo ) / 2;
		if( mid <= lo || mid >= hi ) { break; } // adjacent doubles
		const double f_mid = map( mid );
		if( f_mid == target ) { return mid; }
		if( ( f_mid < target ) == increasing ) {
			lo = mid;
		} else {
			hi = mid;
		}
	}
	return lo + ( hi - lo ) / 2;
}

enum class Codomain { additive_ray, bounded_unit };

/**
 * An order-isomorphism from a segment onto [0, inf] (additive_ray) or [0, 1]
 * (bounded_unit). The family is defined on the unit segment in normalized
 * coordinates t = (a - identity) / (annihilator - identity); any other segment
 * is reached by that affine pre-composition.
 */
class Generator {
public:
	using UnitMap = std::function< double( double ) >;

	/** An empty unit_inverse selects numeric inversion of unit_forward. */
	Generator( Segment segment, Codomain codomain, UnitMap unit_forward, UnitMap unit_inverse,
		std::string family, double parameter ) :
		segment_( segment ), codomain_( codomain ), unit_forward_( std::move( unit_forward ) ),
		unit_inverse_( std::move( unit_inverse ) ), family_( std::move( family ) ),
		parameter_( parameter ) {}

	const Segment &segment() const noexcept { return segment_; }
	Codomain codomain() const noexcept { return codomain_; }
	const std::string &family() const noexcept { return family_; }
	double parameter() const noexcept { return parameter_; }

	/** Image of the annihilator end: +inf or 1. */
	double top() const noexcept {
		return codomain_ == Codomain::additive_ray ? std::numeric_limits< double >::infinity() : 1.0;
	}

	double normalize( double a ) const noexcept {
		const double t = ( a - segment_.identity() ) / ( segment_.annihilator() - segment_.identity() );
		return std::clamp( t, 0.0, 1.0 );
	}

	double denormalize( double t ) const noexcept {
		return segment_.clamp( segment_.identity() + t * ( segment_.annihilator() - segment_.identity() ) );
	}

	double forward( double a ) const {
		if( !segment_.contains( a ) ) {
			throw Error( ErrorKind::OutOfSegment, detail::fmt( a ) + " not in " + segment_.str() );
		}
		if( a == segment_.identity() ) { return 0.0; }
		if( a == segment_.annihilator() ) { return top(); }
		return unit_forward_( normalize( a ) );
	}

	double inverse( double v ) const {
		if( std::isnan( v ) || v < 0 ) {
			throw Error( ErrorKind::OutOfRange, "generator image " + detail::fmt( v ) );
		}
		if( v == 0 ) { return segment_.identity(); }
		if( v >= top() ) { return segment_.annihilator(); }
		double t;
		if( unit_inverse_ ) {
			t = unit_inverse_( v );
		} else {
			auto fwd = [this]( double x ) {
				if( x >= 1.0 ) { return top(); }
				return x <= 0.0 ? 0.0 : unit_forward_( x );
			};
			t = invert_monotone( fwd, v, 0.0, 1.0 );
		}
		return denormalize( t );
	}

	/** Same family on another segment. */
	Generator rescaled( const Segment &segment ) const {
		Generator out = *this;
		out.segment_ = segment;
		return out;
	}

private:
	Segment segment_;
	Codomain codomain_;
	UnitMap unit_forward_;
	UnitMap unit_inverse_;
	std::string family_;
	double parameter_;
};

/** h(a) = log(r / (1 - a) + 1 - r) on [0, 1], onto [0, inf]. */
inline Generator hamacher_generator( double r ) {
	if( !( r > 0 ) || !std::isfinite( r ) ) {
		throw Error( ErrorKind::NonpositiveParameter, "r = " + detail::fmt( r ) );
	}
	// r/(1-t) + 1 - r = 1 + r t/(1-t); log1p/expm1 keep both ends accurate.
	auto forward = [r]( double t ) { return std::log1p( r * t / ( 1.0 - t ) ); };
	auto inverse = [r]( double v ) {
		const double q = std::expm1( v );
		return std::isinf( q ) ? 1.0 : q / ( q + r );
	};
	return Generator( Segment( 0.0, 1.0, Side::positive ), Codomain::additive_ray,
		forward, inverse, "hamacher", r );
}

/** h(a) = a^p on [0, 1], onto [0, 1] under the bounded sum. */
inline Generator power_generator( double p ) {
	if( !( p > 0 ) || !std::isfinite( p ) ) {
		throw Error( ErrorKind::NonpositiveParameter, "p = " + detail::fmt( p ) );
	}
	auto forward = [p]( double t ) { return std::pow( t, p ); };
	auto inverse = [p]( double v ) { return std::pow( std::min( v, 1.0 ), 1.0 / p ); };
	return Generator( Segment( 0.0, 1.0, Side::positive ), Codomain::bounded_unit,
		forward, inverse, "power", p );
}

/** h^-1(h(a) + h(b)) for additive generators, h^-1(min{h(a) + h(b), 1}) for bounded ones. */
inline double transport_combine( const Generator &gen, double a, double b ) {
	const double e = gen.segment().identity();
	if( a == e && gen.segment().contains( b ) ) { return b; }
	if( b == e && gen.segment().contains( a ) ) { return a; }
	const double sum = gen.forward( a ) + gen.forward( b );
	const double image = gen.codomain() == Codomain::bounded_unit ? std::min( sum, 1.0 ) : sum;
	return gen.inverse( image );
}

/**
 * The order-reversing bijection f between the negative segment [lo, e] and the
 * positive segment [e, hi], applied as an involution on [lo, hi].
 */
class DualMap {
public:
	using Map = std::function< double( double ) >;

	DualMap( Segment negative, Segment positive, Map to_positive, Map to_negative ) :
		negative_( negative ), positive_( positive ), to_positive_( std::move( to_positive ) ),
		to_negative_( std::move( to_negative ) ) {}

	/** The affine reflection of [lo, e] onto [e, hi]; f(a) = 2e - a when symmetric. */
	static DualMap reflection( double lo, double e, double hi ) {
		const Segment neg( lo, e, Side::negative ), pos( e, hi, Side::positive );
		const double up = ( hi - e ) / ( e - lo ), down = ( e - lo ) / ( hi - e );
		return DualMap( neg, pos,
			[=]( double a ) { return pos.clamp( e + ( e - a ) * up ); },
			[=]( double b ) { return neg.clamp( e - ( b - e ) * down ); } );
	}

	const Segment &negative() const noexcept { return negative_; }
	const Segment &positive() const noexcept { return positive_; }
	double identity() const noexcept { return positive_.lo(); }

	double operator()( double a ) const {
		if( a < identity() ) {
			if( !negative_.contains( a ) ) {
				throw Error( ErrorKind::OutOfRange, detail::fmt( a ) + " not in " + negative_.str() );
			}
			return to_positive_( a );
		}
		if( a == identity() ) { return a; }
		if( !positive_.contains( a ) ) {
			throw Error( ErrorKind::OutOfRange, detail::fmt( a ) + " not in " + positive_.str() );
		}
		return to_negative_( a );
	}

private:
	Segment negative_;
	Segment positive_;
	Map to_positive_;
	Map to_negative_;
};

/** g built from an additive generator h on [e, z+] and a dual map f. */
class SignedGenerator {
public:
	double identity() const noexcept { return e_; }
	const Generator &positive_generator() const noexcept { return h_; }
	const DualMap &dual_map() const noexcept { return f_; }
	Interval interval() const { return Interval( f_.negative().lo(), h_.segment().hi() ); }
	/** Hypothesis a * f(a) = e failures found while sampling at construction. */
	const std::vector< std::string > &warnings() const noexcept { return warnings_; }

	double g( double a ) const {
		if( a >= e_ ) { return h_.forward( a ); }
		return -h_.forward( f_( a ) );
	}

	double g_inverse( double v ) const {
		if( v >= 0 ) { return h_.inverse( v ); }
		return f_( h_.inverse( -v ) );
	}

	bool undefined_pair( double a, double b ) const noexcept {
		const double lo = f_.negative().lo(), hi = h_.segment().hi();
		return ( a == lo && b == hi ) || ( a == hi && b == lo );
	}

private:
	SignedGenerator( Generator h, DualMap f, double e ) : h_( std::move( h ) ), f_( std::move( f ) ), e_( e ) {}
	friend SignedGenerator make_signed_generator( Generator, DualMap, double );

	Generator h_;
	DualMap f_;
	double e_;
	std::vector< std::string > warnings_;
};

inline double signed_combine( const SignedGenerator &sg, double a, double b );

inline SignedGenerator make_signed_generator( Generator h, DualMap f, double e ) {
	constexpr double match = 1e-12;
	if( h.codomain() != Codomain::additive_ray ) {
		throw Error( ErrorKind::DomainMismatch, "signed generators need an additive generator" );
	}
	const Segment &pos = h.segment();
	if( pos.side() != Side::positive || std::abs( pos.lo() - e ) > match ) {
		throw Error( ErrorKind::DomainMismatch,
			"generator segment " + pos.str() + " does not start at e = " + detail::fmt( e ) );
	}
	if( std::abs( f.positive().lo() - pos.lo() ) > match ||
		std::abs( f.positive().hi() - pos.hi() ) > match ) {
		throw Error( ErrorKind::DomainMismatch,
			"dual map range " + f.positive().str() + " is not " + pos.str() );
	}
	if( std::abs( f( f.negative().lo() ) - pos.hi() ) > match ) {
		throw Error( ErrorKind::DomainMismatch, "dual map does not send the lower endpoint to the upper" );
	}
	SignedGenerator sg( std::move( h ), std::move( f ), e );
	constexpr int checks = 64;
	const Segment &neg = sg.dual_map().negative();
	for( int i = 1; i <= checks; ++i ) {
		const double a = neg.lo() + ( neg.hi() - neg.lo() ) * i / ( checks + 1 );
		const double r = signed_combine( sg, a, sg.dual_map()( a ) );
		if( !( std::abs( r - e ) <= 1e-9 ) ) {
			sg.warnings_.push_back( "a * f(a) = " + detail::fmt( r ) + " at a = " + detail::fmt( a ) );
		}
	}
	return sg;
}

/** g^-1(g(a) + g(b)); endpoints absorb everything but the opposite endpoint. */
inline double signed_combine( const SignedGenerator &sg, double a, double b ) {
	const Interval range = sg.interval();
	validate_value( a, range );
	validate_value( b, range );
	if( sg.undefined_pair( a, b ) ) {
		throw Error( ErrorKind::UndefinedEndpointPair, detail::fmt( a ) + ", " + detail::fmt( b ) );
	}
	return range.clamp( sg.g_inverse( sg.g( a ) + sg.g( b ) ) );
}

/** y(a) = (1 - s) a / (s + (1 - 2s) a): [0, 1] onto itself with y(s) = 1/2. */
class PriorReparametrization {
public:
	explicit PriorReparametrization( double s ) : s_( s ) {
		if( !( s > 0 && s < 1 ) ) {
			throw Error( ErrorKind::PriorOutOfRange, "s = " + detail::fmt( s ) );
		}
	}

	double prior() const noexcept { return s_; }

	double operator()( double a ) const noexcept {
		return ( 1 - s_ ) * a / ( s_ + ( 1 - 2 * s_ ) * a );
	}

	double inverse( double y ) const noexcept {
		return s_ * y / ( ( 1 - s_ ) - ( 1 - 2 * s_ ) * y );
	}

private:
	double s_;
};

inline PriorReparametrization prior_reparametrization( double s ) {
	return PriorReparametrization( s );
}

/**
 * A bijection from an interval onto the extended reals with g(identity) = 0.
 * Either orientation is allowed; a * b = g^-1(g(a) + g(b)) does not care.
 */
struct RealBijection {
	Interval domain;
	std::function< double( double ) > forward;
	std::function< double( double ) > inverse;
};

/** g(a) = log(1/a - 1) on [0, 1]; decreasing, the r = 2 Hamacher form in log-odds. */
inline RealBijection log_odds_bijection() {
	return RealBijection{ Interval( 0.0, 1.0 ),
		[]( double a ) { return std::log( ( 1 - a ) / a ); },
		[]( double v ) { return 1 / ( 1 + std::exp( v ) ); } };
}

inline RealBijection compose_generator( const RealBijection &g, const PriorReparametrization &y ) {
	if( !( g.domain == Interval( 0.0, 1.0 ) ) ) {
		throw Error( ErrorKind::DomainMismatch, "reparametrization lands in [0, 1], g is on " + g.domain.str() );
	}
	return RealBijection{ Interval( 0.0, 1.0 ),
		[g, y]( double a ) { return g.forward( y( a ) ); },
		[g, y]( double v ) { return std::clamp( y.inverse( g.inverse( v ) ), 0.0, 1.0 ); } };
}

/** g^-1(g(a) + g(b)); opposite infinities are undefined. */
inline double bijection_combine( const RealBijection &g, double a, double b ) {
	validate_value( a, g.domain );
	validate_value( b, g.domain );
	const double sum = g.forward( a ) + g.forward( b );
	if( std::isnan( sum ) ) {
		throw Error( ErrorKind::UndefinedEndpointPair, detail::fmt( a ) + ", " + detail::fmt( b ) );
	}
	return g.domain.clamp( g.inverse( sum ) );
}

} // namespace evcomb

#endif // EVCOMB_GENERATORS_HPP
