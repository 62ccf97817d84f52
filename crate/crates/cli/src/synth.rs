//! Synthetic multi-language fixture: hourly gzip dumps, hyperlinks,
//! summaries, stopwords, labeling rules and a ready-to-run config.
//!
//! Every language shares one burst schedule, so the same planted events
//! peak together across editions. Planted clusters carry the labels music,
//! politics and football in that order.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use flate2::write::GzEncoder;
use flate2::Compression;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wikitrends::ingest::{generate_synthetic, BurstWindow, SyntheticSpec};
use wikitrends::report::hour_stamp;
use wikitrends::{Label, PageId};

use crate::config::derive_seed;
use crate::CliError;

const CLUSTER_LABELS: [Label; 3] = [Label::Music, Label::Politics, Label::Football];

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureOptions {
    pub languages: Vec<String>,
    pub t_hours: usize,
    pub n_noise_pages: usize,
    pub seed: u64,
}

impl Default for FixtureOptions {
    fn default() -> Self {
        FixtureOptions {
            languages: vec!["en".into(), "fr".into(), "ru".into()],
            t_hours: 400,
            n_noise_pages: 60,
            seed: 42,
        }
    }
}

struct Lexicon {
    stopwords: [&'static str; 10],
    vocab: [(Label, [&'static str; 10]); 5],
    title_patterns: [(&'static str, Label); 3],
    keyword_sets: [(Label, [&'static str; 3]); 5],
}

fn lexicon(code: &str) -> Option<Lexicon> {
    use Label::*;
    Some(match code {
        "en" => Lexicon {
            stopwords: ["the", "and", "of", "is", "a", "in", "was", "by", "for", "with"],
            vocab: [
                (Music, ["album", "song", "band", "singer", "guitar", "record", "tour", "chart", "single", "lyrics"]),
                (Politics, ["political", "party", "republican", "election", "senate", "vote", "campaign", "governor", "congress", "policy"]),
                (Football, ["football", "club", "league", "goal", "striker", "match", "stadium", "coach", "season", "transfer"]),
                (Movies, ["film", "directed", "starring", "actor", "premiere", "cinema", "screenplay", "studio", "sequel", "filming"]),
                (Science, ["scientific", "theory", "physics", "research", "laboratory", "experiment", "quantum", "particle", "discovery", "physicist"]),
            ],
            title_patterns: [("album", Music), ("footballer", Football), ("actor", Movies)],
            keyword_sets: [
                (Politics, ["political", "party", "republican"]),
                (Science, ["scientific", "theory", "physics"]),
                (Movies, ["film", "directed", "starring"]),
                (Music, ["band", "song", "album"]),
                (Football, ["football", "club", "league"]),
            ],
        },
        "fr" => Lexicon {
            stopwords: ["le", "la", "et", "de", "est", "un", "une", "des", "par", "dans"],
            vocab: [
                (Music, ["album", "chanson", "groupe", "chanteur", "guitare", "disque", "tournée", "single", "paroles", "concert"]),
                (Politics, ["politique", "parti", "républicain", "élection", "sénat", "vote", "campagne", "gouvernement", "ministre", "député"]),
                (Football, ["football", "club", "championnat", "but", "attaquant", "match", "stade", "entraîneur", "saison", "transfert"]),
                (Movies, ["film", "réalisé", "acteurs", "acteur", "première", "cinéma", "scénario", "studio", "suite", "tournage"]),
                (Science, ["scientifique", "théorie", "physique", "recherche", "laboratoire", "expérience", "quantique", "particule", "découverte", "physicien"]),
            ],
            title_patterns: [("album", Music), ("footballeur", Football), ("acteur", Movies)],
            keyword_sets: [
                (Politics, ["politique", "parti", "républicain"]),
                (Science, ["scientifique", "théorie", "physique"]),
                (Movies, ["film", "réalisé", "acteurs"]),
                (Music, ["groupe", "chanson", "album"]),
                (Football, ["football", "club", "championnat"]),
            ],
        },
        "ru" => Lexicon {
            stopwords: ["и", "в", "на", "был", "это", "по", "с", "из", "как", "для"],
            vocab: [
                (Music, ["альбом", "песня", "группа", "певец", "гитара", "запись", "тур", "чарт", "сингл", "концерт"]),
                (Politics, ["политический", "партия", "республиканец", "выборы", "сенат", "голосование", "кампания", "губернатор", "конгресс", "министр"]),
                (Football, ["футбол", "клуб", "лига", "гол", "нападающий", "матч", "стадион", "тренер", "сезон", "трансфер"]),
                (Movies, ["фильм", "режиссёр", "актёры", "актёр", "премьера", "кино", "сценарий", "студия", "сиквел", "съёмки"]),
                (Science, ["научный", "теория", "физика", "исследование", "лаборатория", "эксперимент", "квантовый", "частица", "открытие", "физик"]),
            ],
            title_patterns: [("альбом", Music), ("футболист", Football), ("актёр", Movies)],
            keyword_sets: [
                (Politics, ["политический", "партия", "республиканец"]),
                (Science, ["научный", "теория", "физика"]),
                (Movies, ["фильм", "режиссёр", "актёры"]),
                (Music, ["группа", "песня", "альбом"]),
                (Football, ["футбол", "клуб", "лига"]),
            ],
        },
        _ => return None,
    })
}

impl Lexicon {
    fn words(&self, l: Label) -> &[&'static str] {
        &self.vocab.iter().find(|(v, _)| *v == l).expect("label has vocabulary").1
    }

    fn pattern(&self, l: Label) -> Option<&'static str> {
        self.title_patterns.iter().find(|(_, v)| *v == l).map(|(p, _)| *p)
    }

    fn keywords(&self, l: Label) -> &[&'static str] {
        &self.keyword_sets.iter().find(|(v, _)| *v == l).expect("label has a keyword set").1
    }

    fn rules_toml(&self) -> String {
        let mut s = String::from("[title_patterns]\n");
        for (p, l) in &self.title_patterns {
            s.push_str(&format!("\"{p}\" = \"{l}\"\n"));
        }
        for (l, kws) in &self.keyword_sets {
            let kws: Vec<String> = kws.iter().map(|k| format!("\"{k}\"")).collect();
            s.push_str(&format!("\n[[keyword_sets]]\nlabel = \"{l}\"\nkeywords = [{}]\n", kws.join(", ")));
        }
        s
    }

    /// A short summary about `label`; with `rule` set it contains the
    /// label's full keyword set.
    fn summary(&self, label: Label, rule: bool, rng: &mut ChaCha8Rng) -> String {
        let words = self.words(label);
        let mut out: Vec<&str> = Vec::new();
        for _ in 0..8 {
            out.push(words.choose(rng).unwrap());
            if rng.random_bool(0.5) {
                out.push(self.stopwords.choose(rng).unwrap());
            }
        }
        if rule {
            out.extend(self.keywords(label));
        }
        let mut s = out.join(" ");
        s.push('.');
        s
    }
}

#[derive(Serialize)]
struct PlantedDoc {
    clusters: BTreeMap<String, usize>,
    cluster_labels: Vec<Label>,
    windows: Vec<BurstWindow>,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    title: &'a str,
    summary: String,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Internal(format!("{}: {e}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(p) = path.parent() {
        std::fs::create_dir_all(p).map_err(|e| io_err(p, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn write_language(dir: &Path, code: &str, opts: &FixtureOptions) -> Result<(), CliError> {
    let lex = lexicon(code).ok_or_else(|| CliError::Config(format!("no fixture vocabulary for language {code:?}")))?;
    let spec = SyntheticSpec {
        n_noise_pages: opts.n_noise_pages,
        t_hours: opts.t_hours,
        seed: derive_seed(opts.seed, "synth", code),
        schedule_seed: Some(opts.seed),
        ..SyntheticSpec::default()
    };
    let data = generate_synthetic(&spec).map_err(|e| CliError::Config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, "synth-text", code));
    let lang_dir = dir.join(code);

    // titles and summaries
    let n = data.matrix.n_pages();
    let mut titles = Vec::with_capacity(n);
    let mut summaries = String::new();
    for i in 0..n {
        let p = PageId(i as u32);
        let (label, stem) = match data.planted.get(&p) {
            Some(&c) => (CLUSTER_LABELS[c % CLUSTER_LABELS.len()], format!("Event{c}_Page{i}")),
            None => (lex.vocab.choose(&mut rng).unwrap().0, format!("Topic_{i}")),
        };
        let rule = rng.random_bool(0.3);
        let title = match lex.pattern(label) {
            Some(pat) if rule && rng.random_bool(0.5) => format!("{stem}_({pat})"),
            _ => stem,
        };
        if rng.random_bool(0.9) {
            let line = SummaryLine {
                title: &title,
                summary: lex.summary(label, rule, &mut rng),
            };
            summaries.push_str(&serde_json::to_string(&line).expect("summary serializes"));
            summaries.push('\n');
        }
        titles.push(title);
    }
    write(&lang_dir.join("summaries.jsonl"), summaries.as_bytes())?;

    let mut edges = String::new();
    for (s, t) in data.edges.iter() {
        edges.push_str(&format!("{}\t{}\n", titles[s.index()], titles[t.index()]));
    }
    write(&lang_dir.join("edges.tsv"), edges.as_bytes())?;

    let mut stop = String::from("# fixture stopwords\n");
    for w in lex.stopwords {
        stop.push_str(w);
        stop.push('\n');
    }
    write(&lang_dir.join("stopwords.txt"), stop.as_bytes())?;
    write(&lang_dir.join("rules.toml"), lex.rules_toml().as_bytes())?;

    // one gzip dump per hour, with a mobile-project line per page as noise
    let pv_dir = lang_dir.join("pageviews");
    std::fs::create_dir_all(&pv_dir).map_err(|e| io_err(&pv_dir, e))?;
    for h in 0..data.matrix.n_hours() {
        let hour = data.matrix.start_hour() + h as i64;
        let stamp = hour_stamp(hour);
        let name = format!("pageviews-{}-{}0000.gz", &stamp[..8], &stamp[9..]);
        let mut text = String::new();
        for (i, title) in titles.iter().enumerate() {
            let v = data.matrix.get(PageId(i as u32), h);
            if v > 0 {
                text.push_str(&format!("{code} {title} {v} 0\n{code}.m {title} {} 0\n", v / 2 + 1));
            }
        }
        let mut gz = GzEncoder::new(Vec::new(), Compression::default());
        gz.write_all(text.as_bytes()).expect("in-memory write");
        write(&pv_dir.join(name), &gz.finish().expect("in-memory write"))?;
    }

    let planted = PlantedDoc {
        clusters: data.planted.iter().map(|(p, &c)| (titles[p.index()].clone(), c)).collect(),
        cluster_labels: CLUSTER_LABELS.to_vec(),
        windows: data.windows.clone(),
    };
    let mut text = serde_json::to_string_pretty(&planted).expect("planted map serializes");
    text.push('\n');
    write(&lang_dir.join("planted.json"), text.as_bytes())
}

fn rfc3339(hour: i64) -> String {
    chrono::DateTime::from_timestamp(hour * 3600, 0)
        .expect("fixture hours are in range")
        .format("%Y-%m-%dT%H:%M:%SZ")
        .to_string()
}

/// Writes the fixture under `dir` and returns the path of its config.
pub fn write_fixture(dir: &Path, opts: &FixtureOptions) -> Result<PathBuf, CliError> {
    if opts.languages.is_empty() {
        return Err(CliError::Config("fixture needs at least one language".into()));
    }
    opts.languages
        .iter()
        .try_for_each(|code| write_language(dir, code, opts))?;
    let start = wikitrends::ingest::SYNTHETIC_START_HOUR;
    let end = start + opts.t_hours as i64;
    let mut cfg = format!(
        "config_version = 1\noutput_dir = \"out\"\nseed = {}\ndelta_hours = 48\n\n[time_range]\nstart = \"{}\"\nend = \"{}\"\n\n[keywords]\nk = 10\n\n[lda]\nenabled = true\ntopics = 3\niterations = 50\n",
        opts.seed,
        rfc3339(start),
        rfc3339(end)
    );
    for code in &opts.languages {
        cfg.push_str(&format!(
            "\n[[languages]]\ncode = \"{code}\"\npageviews = \"{code}/pageviews/pageviews-*.gz\"\nedges = \"{code}/edges.tsv\"\nsummaries = \"{code}/summaries.jsonl\"\nstopwords = \"{code}/stopwords.txt\"\nrules = \"{code}/rules.toml\"\n"
        ));
    }
    let path = dir.join("config.toml");
    write(&path, cfg.as_bytes())?;
    Ok(path)
}
