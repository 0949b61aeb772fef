use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::{invalid, FieldCitations, GenConfig, GenError, GroundTruth};
use crate::corpus::{AuthorSlot, Corpus, DisciplinePolicy, Publication, Rank, Researcher};
use crate::excellence::DEFAULT_MIN_ACTIVE_YEARS;
use crate::indicators::SchemeId;

/// Splits `total` into integer parts proportional to `weights`, handing
/// leftovers to the largest fractional parts (earliest index on ties).
fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut parts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| {
        (quotas[j] - quotas[j].floor())
            .total_cmp(&(quotas[i] - quotas[i].floor()))
            .then(i.cmp(&j))
    });
    let missing = total - parts.iter().sum::<usize>();
    for &i in order.iter().take(missing) {
        parts[i] += 1;
    }
    parts
}

struct Field {
    id: String,
    discipline: usize,
    category: String,
    citations: FieldCitations,
    publishing: Vec<usize>,
}

struct Member {
    researcher: Researcher,
    field: usize,
    star: bool,
}

/// Draws a corpus and records what was planted. The seed fixes every draw.
pub fn generate_corpus(config: &GenConfig) -> Result<(Corpus, GroundTruth), GenError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let window_len = config.window.len();

    let mut low: Vec<usize> = (0..config.n_fields()).collect();
    low.shuffle(&mut rng);
    let low: BTreeSet<usize> = low.into_iter().take(config.low_coverage_fields).collect();

    let mut fields = Vec::new();
    let mut members: Vec<Member> = Vec::new();
    let mut truth = GroundTruth {
        seed: config.seed,
        stars: BTreeSet::new(),
        coverage: BTreeMap::new(),
        low_coverage_fields: BTreeSet::new(),
        short_tenure: BTreeMap::new(),
        rank_propensity: config.rank_hca_propensity,
        hca_propensity_boost: config.hca_propensity_boost,
        star_rate_exponent: config.star_rate_exponent,
        field_citations: BTreeMap::new(),
        field_publications: BTreeMap::new(),
    };
    let ranks = [Rank::Assistant, Rank::Associate, Rank::Full];
    let mix = config.rank_mix;

    for d in 0..config.n_disciplines {
        for f in 0..config.fields_per_discipline {
            let index = fields.len();
            let field_id = format!("D{:02}F{:02}", d + 1, f + 1);
            let n = rng.random_range(config.researchers_per_field.min..=config.researchers_per_field.max);
            let m = config.field_mean_citations;
            let citations = FieldCitations {
                model: config.citation_model,
                intensity_mean: if m.max > m.min { rng.random_range(m.min..m.max) } else { m.min },
            };

            let mut rank_of: Vec<Rank> = apportion(n, &[mix.assistant, mix.associate, mix.full])
                .into_iter()
                .zip(ranks)
                .flat_map(|(count, rank)| std::iter::repeat_n(rank, count))
                .collect();
            rank_of.shuffle(&mut rng);

            let n_short = (config.short_tenure_share * n as f64).round() as usize;
            let rate = if low.contains(&index) { config.low_coverage_rate } else { config.coverage_rate };
            let n_publishing = ((rate * n as f64).round() as usize).clamp(1, n);

            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let short: BTreeSet<usize> = order[..n_short].iter().copied().collect();
            order.shuffle(&mut rng);
            let publishing_local: Vec<usize> = order[..n_publishing].to_vec();

            let star_pool: Vec<usize> = publishing_local
                .iter()
                .copied()
                .filter(|i| !short.contains(i))
                .collect();
            let n_stars = (config.star_share * star_pool.len() as f64).round() as usize;
            let stars: BTreeSet<usize> = star_pool.iter().copied().take(n_stars).collect();

            let first = members.len();
            for (i, &rank) in rank_of.iter().enumerate() {
                let active_years = if short.contains(&i) {
                    rng.random_range(1..=2.min(window_len))
                } else {
                    rng.random_range(DEFAULT_MIN_ACTIVE_YEARS.min(window_len)..=window_len)
                };
                let id = format!("R{:05}", first + i + 1);
                let star = stars.contains(&i);
                if star {
                    truth.stars.insert(id.clone());
                }
                members.push(Member {
                    researcher: Researcher {
                        id,
                        field_id: field_id.clone(),
                        discipline_id: format!("D{:02}", d + 1),
                        rank,
                        active_years,
                        organization_id: format!("U{:03}", rng.random_range(1..=config.n_organizations)),
                    },
                    field: index,
                    star,
                });
            }

            truth.coverage.insert(field_id.clone(), n_publishing as f64 / n as f64);
            if low.contains(&index) {
                truth.low_coverage_fields.insert(field_id.clone());
            }
            truth.short_tenure.insert(field_id.clone(), n_short);
            truth.field_citations.insert(field_id.clone(), citations);
            let mut publishing: Vec<usize> = publishing_local.iter().map(|i| first + i).collect();
            publishing.sort_unstable();
            fields.push(Field {
                category: format!("SC{:02}{:02}", d + 1, f + 1),
                id: field_id,
                discipline: d,
                citations,
                publishing,
            });
        }
    }

    let publishing: Vec<usize> = fields.iter().flat_map(|f| f.publishing.iter().copied()).collect();
    if config.n_publications < publishing.len() {
        return Err(invalid(
            "n_publications",
            format!(
                "{} publications cannot give each of the {} publishing researchers one",
                config.n_publications,
                publishing.len()
            ),
        ));
    }
    let star_rate = config.hca_propensity_boost.powf(config.star_rate_exponent);
    let weights: Vec<f64> = publishing
        .iter()
        .map(|&m| if members[m].star { star_rate } else { 1.0 })
        .collect();
    let extra = apportion(config.n_publications - publishing.len(), &weights);
    let mut leads: Vec<usize> = publishing
        .iter()
        .zip(extra)
        .flat_map(|(&m, e)| std::iter::repeat_n(m, e + 1))
        .collect();
    leads.shuffle(&mut rng);

    let mut publications = Vec::with_capacity(leads.len());
    for (p, &lead) in leads.iter().enumerate() {
        let field = &fields[members[lead].field];
        *truth.field_publications.entry(field.id.clone()).or_insert(0) += 1;
        let factor = if members[lead].star {
            config.hca_propensity_boost
        } else {
            config.rank_hca_propensity.of(members[lead].researcher.rank)
        };
        let citations = field.citations.scaled(factor).sample(&mut rng);
        let year = rng.random_range(config.window.start_year..=config.window.end_year);

        let mut subject_categories = vec![field.category.clone()];
        if config.fields_per_discipline > 1 && rng.random_bool(config.multi_category_prob) {
            let siblings: Vec<&Field> = fields
                .iter()
                .filter(|f| f.discipline == field.discipline && f.id != field.id)
                .collect();
            let other = siblings[rng.random_range(0..siblings.len())];
            subject_categories.push(other.category.clone());
        }

        let team = &config.team_sizes[field.discipline % config.team_sizes.len()];
        let size = if team.mean > 1.0 {
            let extra: f64 = Poisson::new(team.mean - 1.0).expect("positive mean").sample(&mut rng);
            (1 + extra as usize).min(team.max)
        } else {
            1
        };
        let lead_slot = rng.random_range(0..size);
        let mut authors: Vec<Option<usize>> = vec![None; size];
        authors[lead_slot] = Some(lead);
        for (slot, author) in authors.iter_mut().enumerate() {
            if slot == lead_slot || rng.random_bool(config.external_coauthor_share) {
                continue;
            }
            let pool: &[usize] = if rng.random_bool(config.cross_field_share) {
                &publishing
            } else {
                &field.publishing
            };
            *author = Some(pool[rng.random_range(0..pool.len())]);
        }
        // a repeated pick becomes an external co-author
        let mut seen = BTreeSet::new();
        for author in authors.iter_mut() {
            if let Some(m) = *author {
                if !seen.insert(m) {
                    *author = None;
                }
            }
        }

        let mut byline: Vec<AuthorSlot> = authors
            .iter()
            .enumerate()
            .map(|(i, a)| AuthorSlot {
                position: i as u32 + 1,
                researcher_id: a.map(|m| members[m].researcher.id.clone()),
                organization_id: match a {
                    Some(m) => members[*m].researcher.organization_id.clone(),
                    None => format!("U{:03}", rng.random_range(1..=config.n_organizations)),
                },
            })
            .collect();
        if size >= 2 && rng.random_bool(config.same_org_first_last_prob) {
            let last = size - 1;
            if authors[last].is_none() {
                byline[last].organization_id = byline[0].organization_id.clone();
            } else if authors[0].is_none() {
                byline[0].organization_id = byline[last].organization_id.clone();
            }
        }

        publications.push(Publication {
            id: format!("P{:06}", p + 1),
            year,
            citations,
            subject_categories,
            byline,
        });
    }

    if config.distinct_citations {
        make_distinct(&mut publications);
    }

    let policy = DisciplinePolicy {
        default: SchemeId::EqualFraction,
        disciplines: (0..config.byline_weighted_disciplines)
            .map(|d| (format!("D{:02}", d + 1), SchemeId::BylineWeighted))
            .collect(),
    };
    let researchers = members.into_iter().map(|m| m.researcher).collect();
    Ok((Corpus::new(researchers, publications, config.window, policy), truth))
}

/// Raises counts within each (year, category) group just enough to make
/// them strictly increasing in draw order, preserving the ranking.
fn make_distinct(publications: &mut [Publication]) {
    let mut groups: BTreeMap<(i32, String), Vec<usize>> = BTreeMap::new();
    for (i, p) in publications.iter().enumerate() {
        groups.entry((p.year, p.subject_categories[0].clone())).or_default().push(i);
    }
    for mut members in groups.into_values() {
        members.sort_by_key(|&i| (publications[i].citations, i));
        let mut previous: Option<u64> = None;
        for i in members {
            let c = &mut publications[i].citations;
            if let Some(prev) = previous {
                *c = (*c).max(prev + 1);
            }
            previous = Some(*c);
        }
    }
}
