//! Regenerates `fixtures/products.cypher` and `fixtures/products.snapshot.json`.
//!
//! ```text
//! cargo run -p kgatlas-core --example gen_fixture
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use kgatlas_core::cypher::{execute, parse_script, quote, Params};
use kgatlas_core::graph::GraphStore;
use kgatlas_core::ingest::parse_price;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_963;

/// (category, noun used in product names)
const CATEGORIES: [(&str, &str); 49] = [
    ("Computing Server", "Server"),
    ("Central Processing Unit", "Processor"),
    ("Graphics Card", "Graphics Card"),
    ("Memory Module", "Memory"),
    ("Solid State Drive", "SSD"),
    ("Hard Disk Drive", "HDD"),
    ("Motherboard", "Motherboard"),
    ("Power Supply", "Power Supply"),
    ("Computer Case", "Case"),
    ("CPU Cooler", "Cooler"),
    ("Network Switch", "Switch"),
    ("Router", "Router"),
    ("Firewall", "Firewall"),
    ("Wireless Access Point", "Access Point"),
    ("Storage Array", "Storage Array"),
    ("Network Attached Storage", "NAS"),
    ("Laptop", "Laptop"),
    ("Desktop Computer", "Desktop"),
    ("Workstation", "Workstation"),
    ("Tablet", "Tablet"),
    ("Monitor", "Monitor"),
    ("Projector", "Projector"),
    ("Laser Printer", "Laser Printer"),
    ("Inkjet Printer", "Inkjet Printer"),
    ("Scanner", "Scanner"),
    ("Keyboard", "Keyboard"),
    ("Mouse", "Mouse"),
    ("Headset", "Headset"),
    ("Webcam", "Webcam"),
    ("Uninterruptible Power Supply", "UPS"),
    ("Rack Cabinet", "Rack"),
    ("Network Interface Card", "NIC"),
    ("Optical Transceiver", "Transceiver"),
    ("RAID Controller", "RAID Controller"),
    ("Tape Library", "Tape Library"),
    ("KVM Switch", "KVM"),
    ("Surveillance Camera", "Camera"),
    ("Network Video Recorder", "NVR"),
    ("Thin Client", "Thin Client"),
    ("All-in-One PC", "All-in-One"),
    ("Mini PC", "Mini PC"),
    ("Edge Server", "Edge Server"),
    ("AI Accelerator", "Accelerator"),
    ("Storage Server", "Storage Server"),
    ("Blade Server", "Blade"),
    ("Load Balancer", "Load Balancer"),
    ("VPN Gateway", "VPN Gateway"),
    ("Industrial PC", "Industrial PC"),
    ("USB Flash Drive", "Flash Drive"),
];

const BRANDS: [&str; 147] = [
    "Huawei",
    "Lenovo",
    "Dell",
    "HP",
    "HPE",
    "Inspur",
    "Sugon",
    "H3C",
    "ZTE",
    "Cisco",
    "IBM",
    "Intel",
    "AMD",
    "NVIDIA",
    "Kingston",
    "Samsung",
    "Seagate",
    "Western Digital",
    "Toshiba",
    "Micron",
    "SK hynix",
    "Crucial",
    "ASUS",
    "Acer",
    "MSI",
    "Gigabyte",
    "Supermicro",
    "Fujitsu",
    "NEC",
    "Hitachi",
    "Oracle",
    "Apple",
    "Xiaomi",
    "Ruijie",
    "TP-Link",
    "Netgear",
    "D-Link",
    "Juniper",
    "Arista",
    "Aruba",
    "Ubiquiti",
    "MikroTik",
    "Fortinet",
    "Palo Alto Networks",
    "Check Point",
    "Sangfor",
    "Hikvision",
    "Dahua",
    "Epson",
    "Canon",
    "Brother",
    "Ricoh",
    "Kyocera",
    "Xerox",
    "Pantum",
    "Logitech",
    "Razer",
    "Corsair",
    "Cooler Master",
    "Thermaltake",
    "Antec",
    "Seasonic",
    "Noctua",
    "EVGA",
    "Zotac",
    "Sapphire",
    "PowerColor",
    "ASRock",
    "Biostar",
    "Phytium",
    "Loongson",
    "Hygon",
    "Zhaoxin",
    "Great Wall",
    "Tongfang",
    "Hasee",
    "Mechrevo",
    "Thunderobot",
    "Colorful",
    "Galaxy",
    "Lexar",
    "SanDisk",
    "Transcend",
    "ADATA",
    "Patriot",
    "G.Skill",
    "TeamGroup",
    "Netac",
    "ZhiTai",
    "Synology",
    "QNAP",
    "Buffalo",
    "Promise",
    "NetApp",
    "Pure Storage",
    "Quantum",
    "Eaton",
    "APC",
    "Vertiv",
    "Delta",
    "Kehua",
    "Emerson",
    "Tripp Lite",
    "CyberPower",
    "BenQ",
    "ViewSonic",
    "LG",
    "AOC",
    "Philips",
    "Sony",
    "Panasonic",
    "Sharp",
    "Optoma",
    "Xgimi",
    "Jabra",
    "Plantronics",
    "Sennheiser",
    "HyperX",
    "SteelSeries",
    "Edifier",
    "Rapoo",
    "Keychron",
    "Cherry",
    "Ducky",
    "Broadcom",
    "Marvell",
    "Mellanox",
    "Chelsio",
    "Finisar",
    "Innolight",
    "Eoptolink",
    "Accelink",
    "Adaptec",
    "LSI",
    "Areca",
    "ATEN",
    "Raritan",
    "Uniview",
    "Axis",
    "Bosch",
    "Advantech",
    "IEI",
    "Kontron",
    "Beckhoff",
    "F5",
    "A10 Networks",
    "Array Networks",
];

const SERIES_PREFIX: [&str; 16] = [
    "X", "S", "T", "V", "R", "G", "Z", "K", "M", "NF", "Pro", "Neo", "Ultra", "Max", "Edge",
    "Prime",
];

struct Product {
    name: String,
    brand: &'static str,
    model: String,
    price: String,
    categories: Vec<usize>,
    description: String,
}

fn series(rng: &mut ChaCha8Rng) -> String {
    let prefix = SERIES_PREFIX.choose(rng).unwrap();
    format!("{prefix}{}", rng.gen_range(100..10_000))
}

fn price_text(rng: &mut ChaCha8Rng) -> String {
    let amount = rng.gen_range(1..1_000) * 100 - rng.gen_range(0..2);
    match rng.gen_range(0..20) {
        0..=11 => format!("{amount} yuan"),
        12..=16 => format!("¥{amount}"),
        _ => format!("${amount}"),
    }
}

fn build(rng: &mut ChaCha8Rng) -> Vec<Product> {
    let mut names = BTreeSet::new();
    let mut models = BTreeSet::new();

    let taishan = Product {
        name: "Huawei TaiShan Server".into(),
        brand: "Huawei",
        model: "Huawei TaiShan".into(),
        price: "23500 yuan".into(),
        categories: vec![],
        description: "A high-performance server based on Kunpeng processors".into(),
    };
    names.insert(taishan.name.clone());
    models.insert(taishan.model.clone());

    let mut prices = BTreeSet::from([taishan.price.clone()]);
    while prices.len() < 233 {
        prices.insert(price_text(rng));
    }
    prices.remove(&taishan.price);
    let mut distinct_prices: Vec<String> = prices.into_iter().collect();
    distinct_prices.shuffle(rng);
    distinct_prices.insert(0, taishan.price.clone());

    // 264 products with their own model, then 4 variants reusing a model.
    let mut out = vec![taishan];
    for i in 0..264 {
        let brand = if i < BRANDS.len() {
            BRANDS[i]
        } else {
            BRANDS.choose(rng).unwrap()
        };
        let category = if i < CATEGORIES.len() {
            i
        } else if rng.gen_bool(0.15) {
            0
        } else {
            rng.gen_range(0..CATEGORIES.len())
        };
        let noun = CATEGORIES[category].1;
        let (name, model) = loop {
            let s = series(rng);
            let model = format!("{brand} {s}");
            let name = format!("{brand} {s} {noun}");
            if !models.contains(&model) && !names.contains(&name) {
                break (name, model);
            }
        };
        names.insert(name.clone());
        models.insert(model.clone());
        out.push(Product {
            description: format!("{} from {brand}.", CATEGORIES[category].0),
            name,
            brand,
            model,
            price: String::new(),
            categories: vec![category],
        });
    }
    let mut variants = Vec::new();
    let mut bases: Vec<usize> = (1..out.len()).collect();
    bases.shuffle(rng);
    for &base in &bases[..4] {
        let b = &out[base];
        let category = loop {
            let c = rng.gen_range(0..CATEGORIES.len());
            if c != b.categories[0] {
                break c;
            }
        };
        let name = format!("{} {}", b.model, CATEGORIES[category].1);
        assert!(names.insert(name.clone()), "variant name clash: {name}");
        variants.push(Product {
            description: format!("{} from {}.", CATEGORIES[category].0, b.brand),
            name,
            brand: b.brand,
            model: b.model.clone(),
            price: String::new(),
            categories: vec![category],
        });
    }
    out.extend(variants);
    assert_eq!(out.len(), 269);

    // Every distinct price is used at least once.
    let rest = out.len() - 1;
    let mut price_slots: Vec<String> = distinct_prices[1..].to_vec();
    while price_slots.len() < rest {
        price_slots.push(distinct_prices.choose(rng).unwrap().clone());
    }
    price_slots.shuffle(rng);
    for (p, price) in out[1..].iter_mut().zip(price_slots) {
        p.price = price;
    }

    // 35 products also belong to a second category.
    let mut picks: Vec<usize> = (1..out.len()).collect();
    picks.shuffle(rng);
    for &i in &picks[..35] {
        let first = out[i].categories[0];
        let second = loop {
            let c = rng.gen_range(0..CATEGORIES.len());
            if c != first {
                break c;
            }
        };
        out[i].categories.push(second);
    }
    out
}

fn script(products: &[Product]) -> String {
    let mut s = String::new();
    for (category, _) in CATEGORIES {
        writeln!(s, "MERGE (c:Category {{name: {}}});", quote(category)).unwrap();
    }
    for p in products {
        s.push('\n');
        let category = p
            .categories
            .first()
            .map_or("Computing Server", |&c| CATEGORIES[c].0);
        writeln!(
            s,
            "MERGE (p:Product {{name: {}, category: {}, description: {}}})",
            quote(&p.name),
            quote(category),
            quote(&p.description)
        )
        .unwrap();
        writeln!(s, "MERGE (b:Brand {{name: {}}})", quote(p.brand)).unwrap();
        writeln!(s, "MERGE (m:Model {{name: {}}})", quote(&p.model)).unwrap();
        let parsed = parse_price(&p.price).expect("generated prices parse");
        write!(
            s,
            "MERGE (pr:Price {{name: {}, amount: {}",
            quote(&p.price),
            parsed.amount
        )
        .unwrap();
        if let Some(c) = parsed.currency {
            write!(s, ", currency: {}", quote(c)).unwrap();
        }
        writeln!(s, "}})").unwrap();
        for (i, &c) in p.categories.iter().enumerate() {
            writeln!(
                s,
                "MERGE (c{i}:Category {{name: {}}})",
                quote(CATEGORIES[c].0)
            )
            .unwrap();
        }
        writeln!(s, "MERGE (p)-[:HAS_BRAND]->(b)").unwrap();
        writeln!(s, "MERGE (p)-[:HAS_MODEL]->(m)").unwrap();
        writeln!(s, "MERGE (p)-[:HAS_PRICE]->(pr)").unwrap();
        for i in 0..p.categories.len() {
            writeln!(s, "MERGE (p)-[:BELONGS_TO]->(c{i})").unwrap();
        }
        s.pop();
        s.push_str(";\n");
    }
    s
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let products = build(&mut rng);
    let text = script(&products);

    let mut store = GraphStore::new();
    for q in parse_script(&text).expect("script parses") {
        execute(&q, &Params::new(), &mut store).expect("script executes");
    }
    let stats = store.stats();
    println!("{}", serde_json::to_string_pretty(&stats).unwrap());

    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::write(dir.join("products.cypher"), &text).unwrap();
    store.snapshot(dir.join("products.snapshot.json")).unwrap();
}
