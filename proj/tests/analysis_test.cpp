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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "evcomb/analysis.hpp"
#include "evcomb/operators.hpp"
#include "oracles.hpp"

using namespace evcomb;

namespace {

OperatorSpec spec_of( Family f ) {
	OperatorSpec spec;
	spec.family = f;
	return spec;
}

OperatorSpec with( OperatorSpec spec, std::optional< double > OperatorSpec::*field, double v ) {
	spec.*field = v;
	return spec;
}

std::vector< OperatorSpec > catalog() {
	std::vector< OperatorSpec > out;
	for( const double r : { 0.5, 1.0, 2.0, 5.0 } ) { out.push_back( with( spec_of( Family::hamacher ), &OperatorSpec::r, r ) ); }
	out.push_back( spec_of( Family::bernoulli ) );
	out.push_back( spec_of( Family::velocity ) );
	for( const double p : { 0.5, 1.0, 3.0 } ) { out.push_back( with( spec_of( Family::power_sum ), &OperatorSpec::p, p ) ); }
	for( const double r : { 0.5, 1.0, 3.0 } ) {
		OperatorSpec s = with( spec_of( Family::symmetric_hamacher ), &OperatorSpec::r, r );
		s.range = { -1, 1 };
		out.push_back( s );
	}
	out.push_back( spec_of( Family::mycin ) );
	out.push_back( with( spec_of( Family::median ), &OperatorSpec::z, 0.5 ) );
	out.push_back( spec_of( Family::harmonic_annihilator ) );
	for( const double s : { 0.001, 0.2, 0.5 } ) { out.push_back( with( spec_of( Family::bayes_prior ), &OperatorSpec::s, s ) ); }
	return out;
}

Combiner original_mycin() {
	OperatorSpec spec = spec_of( Family::custom_piecewise );
	spec.range = { -1, 1 };
	spec.identity = 0;
	spec.segments = { { "bernoulli", std::nullopt, std::nullopt }, { "bernoulli", std::nullopt, std::nullopt } };
	spec.cross = CrossRule::additive;
	return build_operator( spec );
}

} // namespace

TEST( CheckLaws, CatalogPasses ) {
	for( const OperatorSpec &spec : catalog() ) {
		const Combiner c = build_operator( spec );
		const PropertyReport report = check_laws( c, 10000, 1e-9, 0 );
		EXPECT_TRUE( report.pass() ) << c.provenance().family;
		EXPECT_EQ( report.laws.size(), all_laws.size() );
		for( const LawResult &r : report.laws ) {
			EXPECT_LE( r.max_violation, r.tolerance ) << c.provenance().family << " " << to_string( r.law );
		}
	}
}

TEST( CheckLaws, VelocityDiscoversStructure ) {
	const PropertyReport report = check_laws( build_operator( spec_of( Family::velocity ) ), 10000, 1e-9, 7 );
	EXPECT_TRUE( report.pass() );
	ASSERT_TRUE( report.discovered_identity.has_value() );
	EXPECT_NEAR( *report.discovered_identity, 0.0, 1e-12 );
	EXPECT_EQ( report.discovered_annihilators, ( std::vector< double >{ -1, 1 } ) );
	EXPECT_GT( report.law( Law::associativity ).evaluated, 9000u );
}

TEST( CheckLaws, MedianHasNoIdentity ) {
	const PropertyReport report =
		check_laws( build_operator( with( spec_of( Family::median ), &OperatorSpec::z, 0.5 ) ), 10000, 1e-9, 0 );
	EXPECT_TRUE( report.pass() );
	EXPECT_FALSE( report.discovered_identity.has_value() );
	EXPECT_TRUE( report.idempotents.all_idempotent );
	EXPECT_EQ( report.discovered_annihilators, std::vector< double >{ 0.5 } );
}

TEST( CheckLaws, FindsAssociativityWitness ) {
	const Combiner c = original_mycin();
	const PropertyReport report = check_laws( c, 10000, 1e-9, 0 );
	EXPECT_FALSE( report.pass() );
	const LawResult &assoc = report.law( Law::associativity );
	EXPECT_FALSE( assoc.pass );
	ASSERT_TRUE( assoc.witness.has_value() );
	const auto recomputed = law_violation( c, Law::associativity, *assoc.witness );
	ASSERT_TRUE( recomputed.has_value() );
	EXPECT_NEAR( *recomputed, assoc.max_violation, 1e-12 );
	// Independent recomputation from the three witness values.
	const auto &x = assoc.witness->x;
	const double lhs = oracle::original_mycin( oracle::original_mycin( x[ 0 ], x[ 1 ] ), x[ 2 ] );
	const double rhs = oracle::original_mycin( x[ 0 ], oracle::original_mycin( x[ 1 ], x[ 2 ] ) );
	EXPECT_NEAR( std::abs( lhs - rhs ), assoc.max_violation, 1e-12 );
	EXPECT_TRUE( report.law( Law::commutativity ).pass );
}

TEST( CheckLaws, DeterministicAcrossSeedsAndThreads ) {
	const Combiner c = original_mycin();
	const PropertyReport one = check_laws( c, 5000, 1e-9, 11, 1 );
	const PropertyReport four = check_laws( c, 5000, 1e-9, 11, 4 );
	const PropertyReport again = check_laws( c, 5000, 1e-9, 11, 1 );
	ASSERT_EQ( one.laws.size(), four.laws.size() );
	for( std::size_t i = 0; i < one.laws.size(); ++i ) {
		EXPECT_EQ( one.laws[ i ].max_violation, four.laws[ i ].max_violation );
		EXPECT_EQ( one.laws[ i ].max_violation, again.laws[ i ].max_violation );
		EXPECT_EQ( one.laws[ i ].evaluated, four.laws[ i ].evaluated );
		EXPECT_EQ( one.laws[ i ].witness.has_value(), four.laws[ i ].witness.has_value() );
		if( one.laws[ i ].witness ) {
			EXPECT_EQ( one.laws[ i ].witness->x, four.laws[ i ].witness->x );
			EXPECT_EQ( one.laws[ i ].witness->sample_index, four.laws[ i ].witness->sample_index );
		}
	}
	const PropertyReport other = check_laws( c, 5000, 1e-9, 12, 1 );
	EXPECT_NE( one.law( Law::associativity ).witness->x, other.law( Law::associativity ).witness->x );
}

TEST( CheckLaws, DetectsBrokenMonotonicityAndIdentity ) {
	const Combiner decreasing( Interval( 0, 1 ), []( double a, double b ) { return 1 - a * b; }, Provenance{ "test", {} } );
	const PropertyReport r1 = check_laws( decreasing, 2000, 1e-9, 0 );
	EXPECT_FALSE( r1.law( Law::monotonicity ).pass );

	Combiner lying( Interval( 0, 1 ), []( double a, double b ) { return a * b; }, Provenance{ "test", {} } );
	lying.with_identity( 0 );
	const PropertyReport r2 = check_laws( lying, 2000, 1e-9, 0 );
	EXPECT_FALSE( r2.law( Law::identity ).pass );
	EXPECT_TRUE( r2.law( Law::associativity ).pass );
}

TEST( CheckLaws, DetectsJump ) {
	const Combiner jump( Interval( 0, 1 ), []( double a, double b ) { return std::max( a, b ) < 0.5 ? std::max( a, b ) : 1.0; },
		Provenance{ "test", {} } );
	const PropertyReport r = check_laws( jump, 2000, 1e-9, 0 );
	EXPECT_FALSE( r.law( Law::continuity ).pass );
	EXPECT_GT( r.law( Law::continuity ).max_violation, 0.1 );
}

TEST( FindIdempotents, Examples ) {
	const IdempotentScan bern = find_idempotents( build_operator( spec_of( Family::bernoulli ) ), 1001 );
	EXPECT_EQ( bern.points, ( std::vector< double >{ 0, 1 } ) );
	EXPECT_FALSE( bern.all_idempotent );

	const IdempotentScan med =
		find_idempotents( build_operator( with( spec_of( Family::median ), &OperatorSpec::z, 0.5 ) ), 101 );
	EXPECT_TRUE( med.all_idempotent );
	EXPECT_EQ( med.points.size(), 101u );

	const IdempotentScan mycin = find_idempotents( build_operator( spec_of( Family::mycin ) ), 1001 );
	EXPECT_EQ( mycin.points, ( std::vector< double >{ -1, 0, 1 } ) );
}

TEST( ClassifySegment, Examples ) {
	const Segment unit( 0, 1, Side::positive );
	for( const double r : { 0.5, 1.0, 2.0, 5.0 } ) {
		const auto cls = classify_segment( build_operator( with( spec_of( Family::hamacher ), &OperatorSpec::r, r ) ), unit );
		EXPECT_EQ( cls.kind, SegmentKind::addition_type );
		EXPECT_FALSE( cls.witness.has_value() );
	}
	const auto bounded = classify_segment( build_operator( with( spec_of( Family::power_sum ), &OperatorSpec::p, 1 ) ), unit );
	EXPECT_EQ( bounded.kind, SegmentKind::bounded_sum_type );
	ASSERT_TRUE( bounded.witness.has_value() );
	EXPECT_EQ( bounded.witness->point, 0.5 );
	EXPECT_EQ( bounded.witness->iterations, 1u );

	const auto upper = classify_segment( build_operator( spec_of( Family::harmonic_annihilator ) ),
		Segment( 0.5, 1, Side::positive ) );
	EXPECT_EQ( upper.kind, SegmentKind::addition_type );

	const auto neg = classify_segment( build_operator( spec_of( Family::velocity ) ), Segment( -1, 0, Side::negative ) );
	EXPECT_EQ( neg.kind, SegmentKind::addition_type );
}

// a^(n*) under p = 3 reaches 1 once n a^3 >= 1.
TEST( ClassifySegment, PowerSumWitnessCount ) {
	const auto cls = classify_segment( build_operator( with( spec_of( Family::power_sum ), &OperatorSpec::p, 3 ) ),
		Segment( 0, 1, Side::positive ) );
	EXPECT_EQ( cls.kind, SegmentKind::bounded_sum_type );
	ASSERT_TRUE( cls.witness.has_value() );
	// Self-combination doubles a^3: 0.125, 0.25, 0.5, 1.
	EXPECT_EQ( cls.witness->point, 0.5 );
	EXPECT_EQ( cls.witness->iterations, 3u );
}

TEST( Slope, Analytic ) {
	EXPECT_EQ( analytic_hamacher_slope( 1 ), 1.0 );
	EXPECT_EQ( analytic_hamacher_slope( 2 ), 1.0 );
	EXPECT_DOUBLE_EQ( analytic_hamacher_slope( 4 ), 4.0 / 3 );
	EXPECT_THROW( analytic_hamacher_slope( 0 ), Error );
}

// Closed-form partial derivative: d/da of the Hamacher form, maximized on a fine grid.
TEST( Slope, AnalyticMatchesDerivativeSearch ) {
	for( const double r : { 0.5, 1.0, 2.0, 3.0, 4.0, 6.0 } ) {
		double best = 0;
		for( int i = 0; i <= 400; ++i ) {
			for( int j = 0; j <= 400; ++j ) {
				const double a = i / 400.0, b = j / 400.0;
				const double den = 1 + ( r - 1 ) * a * b;
				const double num = a + b + ( r - 2 ) * a * b;
				const double d = ( ( 1 + ( r - 2 ) * b ) * den - num * ( r - 1 ) * b ) / ( den * den );
				best = std::max( best, std::abs( d ) );
			}
		}
		EXPECT_NEAR( best, analytic_hamacher_slope( r ), 1e-3 ) << r;
	}
}

TEST( Slope, NumericEstimates ) {
	for( const double r : { 1.0, 2.0, 4.0 } ) {
		const SlopeEstimate est =
			estimate_max_slope( build_operator( with( spec_of( Family::hamacher ), &OperatorSpec::r, r ) ), 1e-3 );
		EXPECT_NEAR( est.max_slope, analytic_hamacher_slope( r ), 1e-2 ) << r;
	}
	const SlopeEstimate one =
		estimate_max_slope( build_operator( with( spec_of( Family::hamacher ), &OperatorSpec::r, 1 ) ), 1e-3 );
	EXPECT_GE( one.max_slope, 0.99 );
	EXPECT_LE( one.max_slope, 1.01 );
	const SlopeEstimate med =
		estimate_max_slope( build_operator( with( spec_of( Family::median ), &OperatorSpec::z, 0.5 ) ), 1e-3 );
	EXPECT_LE( med.max_slope, 1.0 + 1e-9 );
	const SlopeEstimate sum =
		estimate_max_slope( build_operator( with( spec_of( Family::power_sum ), &OperatorSpec::p, 1 ) ), 1e-3 );
	EXPECT_LE( sum.max_slope, 1.01 );
	EXPECT_THROW( estimate_max_slope( build_operator( spec_of( Family::bernoulli ) ), 0 ), Error );
}

TEST( DivergenceProbe, MycinPoints ) {
	const Combiner c = build_operator( spec_of( Family::mycin ) );
	const double d = 1e-3;
	auto at = [&]( double eps ) {
		const double a = -1 + eps;
		return c( a, -a + d );
	};
	EXPECT_NEAR( at( 2e-3 ), 0.5, 1e-9 );
	EXPECT_NEAR( at( 1.01e-3 ), 0.990, 1e-3 );
	EXPECT_NEAR( at( 0.5 ), 0.002, 1e-9 );
	for( const double eps : { 0.5, 0.1, 0.01, 2e-3 } ) { EXPECT_NEAR( at( eps ), d / eps, 1e-9 ); }
}

TEST( DivergenceProbe, MycinSpan ) {
	const DivergenceProbe probe = cross_divergence_probe( build_operator( spec_of( Family::mycin ) ), 1e-3 );
	EXPECT_LE( probe.min_output, 0.01 );
	EXPECT_GE( probe.max_output, 0.99 );
	EXPECT_GE( probe.span_fraction, 0.98 );
	for( const auto &pt : probe.sweep ) {
		EXPECT_NEAR( pt.output, ( pt.a + pt.b ) / ( 1 + pt.a ), 1e-9 );
		EXPECT_NEAR( pt.b - ( -pt.a ), 1e-3, 1e-12 );
	}
}

TEST( DivergenceProbe, SmallerPerturbationStillSpans ) {
	for( const double d : { 1e-4, 1e-6 } ) {
		const DivergenceProbe probe = cross_divergence_probe( build_operator( spec_of( Family::velocity ) ), d );
		EXPECT_GE( probe.span_fraction, 0.98 ) << d;
	}
}

TEST( DivergenceProbe, Errors ) {
	EXPECT_THROW( cross_divergence_probe( build_operator( spec_of( Family::bernoulli ) ), 1e-3 ), Error );
	EXPECT_THROW( cross_divergence_probe( build_operator( spec_of( Family::mycin ) ), 1.5 ), Error );
	EXPECT_THROW( cross_divergence_probe( build_operator( spec_of( Family::mycin ) ), 0 ), Error );
}

TEST( NaiveBayesOracle, Examples ) {
	EXPECT_NEAR( naive_bayes_oracle( { 0.5, 0.5 }, 0.2 ), 0.8, 1e-15 );
	EXPECT_NEAR( naive_bayes_oracle( { 0.5, 0.5 }, 0.5 ), 0.5, 1e-15 );
	for( const double a : { 0.1, 0.35, 0.9 } ) { EXPECT_NEAR( naive_bayes_oracle( { a }, 0.3 ), a, 1e-15 ); }
	EXPECT_NEAR( naive_bayes_oracle( {}, 0.3 ), 0.3, 1e-15 );
	EXPECT_THROW( naive_bayes_oracle( { 0.0, 0.5 }, 0.2 ), Error );
	EXPECT_THROW( naive_bayes_oracle( { 0.5 }, 1.0 ), Error );
}

TEST( NaiveBayesOracle, AgreesWithOddsProduct ) {
	oracle::Uniform draw( 5, 0.01, 0.99 );
	for( int i = 0; i < 200; ++i ) {
		std::vector< double > post( 1 + i % 6 );
		for( double &p : post ) { p = draw(); }
		const double s = draw();
		EXPECT_NEAR( naive_bayes_oracle( post, s ), oracle::bayes_odds( post, s ), 1e-12 );
	}
}
