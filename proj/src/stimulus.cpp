#include "listsal/stimulus.hpp"
#include "listsal/error.hpp"
#include "raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

namespace listsal::stimulus {

std::string to_string(Magnitude m) { return m == Magnitude::type_i ? "typeI" : "typeII"; }

std::string to_string(OutlierFeature f) {
    switch (f) {
    case OutlierFeature::price: return "price";
    case OutlierFeature::discount_tag: return "discount_tag";
    case OutlierFeature::image: return "image";
    case OutlierFeature::star_rating: return "star_rating";
    }
    return "unknown";
}

std::string to_string(ShapeMotif s) {
    switch (s) {
    case ShapeMotif::phone: return "phone";
    case ShapeMotif::monitor: return "monitor";
    case ShapeMotif::chair: return "chair";
    case ShapeMotif::backpack: return "backpack";
    case ShapeMotif::shoe: return "shoe";
    }
    return "unknown";
}

std::string to_string(AoiKind k) {
    switch (k) {
    case AoiKind::image: return "image";
    case AoiKind::description: return "description";
    case AoiKind::price: return "price";
    }
    return "unknown";
}

Magnitude parse_magnitude(std::string_view s) {
    if (s == "typeI") return Magnitude::type_i;
    if (s == "typeII") return Magnitude::type_ii;
    throw InvalidArgument("unknown magnitude '" + std::string(s) + "' (expected typeI or typeII)");
}

OutlierFeature parse_feature(std::string_view s) {
    if (s == "price") return OutlierFeature::price;
    if (s == "discount_tag" || s == "tag") return OutlierFeature::discount_tag;
    if (s == "image") return OutlierFeature::image;
    if (s == "star_rating" || s == "star") return OutlierFeature::star_rating;
    throw InvalidArgument("unknown outlier feature '" + std::string(s) + "'");
}

ShapeMotif parse_motif(std::string_view s) {
    for (ShapeMotif m : {ShapeMotif::phone, ShapeMotif::monitor, ShapeMotif::chair, ShapeMotif::backpack,
                         ShapeMotif::shoe}) {
        if (s == to_string(m)) return m;
    }
    throw InvalidArgument("unknown shape motif '" + std::string(s) + "'");
}

AoiKind parse_aoi_kind(std::string_view s) {
    if (s == "image") return AoiKind::image;
    if (s == "description") return AoiKind::description;
    if (s == "price") return AoiKind::price;
    throw InvalidArgument("unknown AOI kind '" + std::string(s) + "'");
}

AoiKind display_kind(OutlierFeature f) {
    switch (f) {
    case OutlierFeature::image: return AoiKind::image;
    case OutlierFeature::star_rating: return AoiKind::description;
    case OutlierFeature::price:
    case OutlierFeature::discount_tag: return AoiKind::price;
    }
    return AoiKind::price;
}

void ProductSpec::validate(const std::string& where) const {
    if (price_cents <= 0) throw InvalidArgument(where + ".price must be > 0");
    if (!(star_rating >= 1.0 && star_rating <= 5.0)) {
        throw InvalidArgument(where + ".star_rating must lie in [1,5]");
    }
    if (review_count < 0) throw InvalidArgument(where + ".review_count must be >= 0");
}

void StimulusSpec::validate() const {
    if (products.size() != static_cast<std::size_t>(kProductsPerPage)) {
        throw InvalidArgument("products: a stimulus page holds exactly " + std::to_string(kProductsPerPage) +
                              " products (got " + std::to_string(products.size()) + ")");
    }
    for (std::size_t i = 0; i < products.size(); ++i) {
        products[i].validate("products[" + std::to_string(i) + "]");
    }
    if (outlier && (outlier->position < 1 || outlier->position > kProductsPerPage)) {
        throw InvalidArgument("outlier.position must lie in [1," + std::to_string(kProductsPerPage) + "]");
    }
}

void AoiLayout::validate() const {
    for (std::size_t i = 0; i < aois.size(); ++i) {
        const Rect& r = aois[i].rect;
        if (r.w <= 0 || r.h <= 0 || r.x < 0 || r.y < 0 || r.x + r.w > page_width || r.y + r.h > page_height) {
            throw InvalidArgument("AOI " + std::to_string(i) + " lies outside the page");
        }
        for (std::size_t j = i + 1; j < aois.size(); ++j) {
            if (r.overlaps(aois[j].rect)) {
                throw InvalidArgument("AOIs " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
            }
        }
    }
    for (std::size_t i = 0; i < aois.size(); ++i) {
        for (std::size_t j = 0; j < aois.size(); ++j) {
            if (aois[i].product < aois[j].product && aois[i].rect.y >= aois[j].rect.y + aois[j].rect.h) {
                throw InvalidArgument("AOI vertical order does not follow product order");
            }
        }
    }
}

const Aoi* AoiLayout::find(int product, AoiKind kind) const {
    for (const Aoi& a : aois) {
        if (a.product == product && a.kind == kind) return &a;
    }
    return nullptr;
}

int AoiLayout::product_count() const {
    int n = 0;
    for (const Aoi& a : aois) n = std::max(n, a.product);
    return n;
}

namespace {

struct Template {
    std::string_view query;
    double price_lo;
    double price_hi;
    ShapeMotif motif;
    double hue;
    double hue_spread;
    double sat_lo, sat_hi;
    double val_lo, val_hi;
    std::vector<std::string_view> brands;
    std::vector<std::string_view> models;
    std::vector<std::string_view> variants;
    std::vector<std::string_view> phrases;
};

const std::vector<Template>& templates() {
    static const std::vector<Template> t = {
        {"phones", 150, 900, ShapeMotif::phone, 220, 12, 0.05, 0.20, 0.15, 0.30,
         {"Samsung Galaxy", "Apple iPhone", "Motorola Moto", "Xiaomi Redmi", "Google Pixel", "OnePlus",
          "Nokia", "Sony Xperia", "Oppo Reno", "Fairphone"},
         {"A15", "13", "G84", "Note 13", "8a", "12R", "G42", "10 V", "11", "5", "S23", "Edge 40"},
         {"128GB Black", "256GB Graphite", "128GB Midnight", "64GB Black", "256GB Titanium"},
         {"6.5 inch AMOLED display", "dual SIM", "50 MP main camera", "5000 mAh battery",
          "fast charging", "5G ready", "water resistant", "Android 14"}},
        {"monitors", 120, 700, ShapeMotif::monitor, 210, 15, 0.30, 0.50, 0.30, 0.50,
         {"Dell", "LG UltraGear", "Samsung Odyssey", "AOC", "Philips", "iiyama ProLite", "BenQ", "ASUS",
          "HP", "Lenovo"},
         {"27 inch", "24 inch", "32 inch", "34 inch curved", "28 inch"},
         {"QHD IPS", "Full HD VA", "4K UHD", "QHD 165Hz", "Full HD 75Hz"},
         {"IPS panel", "1 ms response time", "HDMI and DisplayPort", "height adjustable stand",
          "flicker free", "low blue light", "VESA mount", "built-in speakers"}},
        {"chairs", 80, 450, ShapeMotif::chair, 20, 10, 0.05, 0.15, 0.10, 0.25,
         {"Songmics", "Hbada", "Vinsetto", "Flexispot", "Sihoo", "Dowinx", "Kinsal", "Backforce"},
         {"Ergo", "Office", "Executive", "Mesh", "Task", "Gaming"},
         {"Chair Black", "Chair Grey", "Chair with Headrest", "Chair Adjustable"},
         {"ergonomic lumbar support", "breathable mesh back", "adjustable armrests", "tilt function",
          "max load 150 kg", "swivel castors", "gas lift height adjustment"}},
        {"backpacks", 30, 150, ShapeMotif::backpack, 215, 10, 0.35, 0.55, 0.25, 0.40,
         {"Eastpak", "Herschel", "Samsonite", "Fjallraven", "The North Face", "Osprey", "Vaude"},
         {"Padded", "Daypack", "Commuter", "Laptop", "Travel", "City"},
         {"Backpack 20L", "Backpack 25L", "Backpack 30L", "Backpack Navy"},
         {"water repellent", "laptop sleeve 15.6 inch", "padded shoulder straps", "side bottle pocket",
          "recycled polyester", "hidden back pocket"}},
        {"shoes", 60, 200, ShapeMotif::shoe, 210, 15, 0.15, 0.35, 0.60, 0.80,
         {"Nike", "Asics", "Adidas", "New Balance", "Brooks", "Hoka", "Saucony", "Mizuno"},
         {"Pegasus", "Gel-Nimbus", "Ultraboost", "Fresh Foam", "Ghost", "Clifton", "Ride", "Wave Rider"},
         {"Running Shoes Men", "Running Shoes Women", "Trail Shoes", "Road Shoes"},
         {"cushioned midsole", "breathable mesh upper", "reflective details", "neutral support",
          "rubber outsole", "lightweight"}},
    };
    return t;
}

const Template& find_template(std::string_view query) {
    for (const Template& t : templates()) {
        if (t.query == query) return t;
    }
    throw InvalidArgument("unknown query '" + std::string(query) +
                          "' (bundled: phones, monitors, chairs, backpacks, shoes)");
}

// Bit-stable across standard libraries: only the engine is used, never a
// std:: distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::string_view text, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h ^ (seed * 0x9E3779B97F4A7C15ULL);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double circular_mean_hue(const std::vector<double>& hues) {
    double s = 0.0, c = 0.0;
    for (double h : hues) {
        s += std::sin(h * M_PI / 180.0);
        c += std::cos(h * M_PI / 180.0);
    }
    double mean = std::atan2(s, c) * 180.0 / M_PI;
    if (mean < 0.0) mean += 360.0;
    return mean;
}

double round_tenth(double v) { return std::round(v * 10.0) / 10.0; }

} // namespace

std::vector<std::string> catalog_queries() {
    std::vector<std::string> q;
    for (const Template& t : templates()) q.emplace_back(t.query);
    return q;
}

std::vector<ProductSpec> sample_products(std::string_view query, int n, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("sample_products: n must be >= 1");
    const Template& t = find_template(query);
    Rng rng(mix_seed(query, seed));

    // List centre chosen so that every factor in [0.75, 1.33] stays inside the
    // band; max/min <= 1.78 keeps each price within x2 of the median.
    const double center = rng.uniform(t.price_lo / 0.75, t.price_hi / 1.33);
    std::vector<ProductSpec> out;
    std::set<std::string> titles;
    while (static_cast<int>(out.size()) < n) {
        ProductSpec p;
        const std::string title = std::string(t.brands[rng.index(t.brands.size())]) + " " +
                                  std::string(t.models[rng.index(t.models.size())]) + " - " +
                                  std::string(t.variants[rng.index(t.variants.size())]);
        if (titles.size() < t.brands.size() * t.models.size() * t.variants.size() && titles.count(title)) {
            continue;
        }
        titles.insert(title);
        p.title = title;
        const std::size_t a = rng.index(t.phrases.size());
        std::size_t b = rng.index(t.phrases.size());
        if (b == a) b = (b + 1) % t.phrases.size();
        p.description = std::string(t.phrases[a]) + ", " + std::string(t.phrases[b]) + ".";
        const double euros = center * rng.uniform(0.75, 1.33);
        p.price_cents = std::max<std::int64_t>(1, std::llround(euros) * 100 - 1);
        p.star_rating = round_tenth(rng.uniform(3.5, 5.0));
        p.review_count = static_cast<int>(5 + rng.index(2500));
        const double hue = t.hue + rng.uniform(-t.hue_spread, t.hue_spread);
        p.image_style.base_color =
            raster::from_hsv(hue, rng.uniform(t.sat_lo, t.sat_hi), rng.uniform(t.val_lo, t.val_hi));
        p.image_style.shape_motif = t.motif;
        p.image_style.background_color = raster::from_hsv(hue, 0.03, rng.uniform(0.94, 0.99));
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ProductSpec> inject_outlier(std::vector<ProductSpec> products, const OutlierSpec& outlier,
                                        std::uint64_t seed) {
    const int n = static_cast<int>(products.size());
    if (outlier.position < 1 || outlier.position > n) {
        throw InvalidArgument("outlier position " + std::to_string(outlier.position) + " outside [1," +
                              std::to_string(n) + "]");
    }
    if (n < 2) throw InvalidArgument("outlier injection needs at least two products");
    const std::size_t target = static_cast<std::size_t>(outlier.position - 1);
    std::vector<const ProductSpec*> others;
    for (std::size_t i = 0; i < products.size(); ++i) {
        if (i != target) others.push_back(&products[i]);
    }
    ProductSpec& p = products[target];
    const bool strong = outlier.magnitude == Magnitude::type_i;

    switch (outlier.feature) {
    case OutlierFeature::price: {
        std::vector<double> prices;
        for (const ProductSpec* o : others) prices.push_back(static_cast<double>(o->price_cents));
        p.price_cents = std::llround((strong ? 10.0 : 2.0) * median_of(prices));
        break;
    }
    case OutlierFeature::discount_tag: {
        static constexpr std::array<std::string_view, 3> kDeals = {"SPECIAL DEAL", "TOP DEAL", "DEAL OF THE DAY"};
        DiscountTag tag{outlier.magnitude,
                        strong ? std::string(kDeals[mix_seed("deal", seed) % kDeals.size()]) : "10% discount"};
        if (p.discount_tag && *p.discount_tag != tag) {
            throw InvalidArgument("product " + std::to_string(outlier.position) +
                                  " already carries a different discount tag");
        }
        p.discount_tag = tag;
        break;
    }
    case OutlierFeature::image: {
        std::vector<double> hues;
        for (const ProductSpec* o : others) {
            double h, s, v;
            raster::to_hsv(o->image_style.base_color, h, s, v);
            hues.push_back(h);
        }
        const double opposite = circular_mean_hue(hues) + 180.0;
        // typeI: saturated complementary palette; typeII: same hue, muted.
        p.image_style.base_color = strong ? raster::from_hsv(opposite, 0.90, 0.95)
                                          : raster::from_hsv(opposite, 0.45, 0.60);
        p.image_style.background_color = raster::from_hsv(opposite, strong ? 0.25 : 0.10, 1.0);
        break;
    }
    case OutlierFeature::star_rating: {
        double lo = 5.0, hi = 1.0;
        for (const ProductSpec* o : others) {
            lo = std::min(lo, o->star_rating);
            hi = std::max(hi, o->star_rating);
        }
        const double span = hi - lo;
        p.star_rating = std::clamp(round_tenth(lo - (strong ? span : span / 2.0)), 1.0, 5.0);
        break;
    }
    }
    return products;
}

StimulusSpec make_stimulus(std::string_view query, std::uint64_t seed, std::optional<OutlierSpec> outlier) {
    StimulusSpec spec;
    spec.query = std::string(query);
    spec.seed = seed;
    spec.products = sample_products(query, kProductsPerPage, seed);
    if (outlier) spec.products = inject_outlier(std::move(spec.products), *outlier, seed);
    spec.outlier = outlier;
    spec.validate();
    return spec;
}

AoiLayout layout_for(int product_count) {
    if (product_count < 1) throw InvalidArgument("layout needs at least one product");
    AoiLayout layout;
    layout.page_width = kPageWidth;
    layout.page_height = kRowHeight * product_count;
    for (int i = 1; i <= product_count; ++i) {
        const int y = (i - 1) * kRowHeight + 10;
        layout.aois.push_back({i, AoiKind::image, {16, y, 140, 140}});
        layout.aois.push_back({i, AoiKind::description, {172, y, 412, 140}});
        layout.aois.push_back({i, AoiKind::price, {600, y, 184, 140}});
    }
    return layout;
}

std::string format_price(std::int64_t cents) {
    const std::int64_t whole = cents / 100;
    const std::int64_t frac = cents % 100;
    std::string s = std::to_string(whole) + ",";
    if (frac < 10) s += "0";
    return s + std::to_string(frac);
}

namespace {

constexpr Rgb8 kTitleBlue{0, 0, 153};
constexpr Rgb8 kBodyGrey{80, 80, 80};
constexpr Rgb8 kLightGrey{150, 150, 150};
constexpr Rgb8 kRule{224, 224, 224};
constexpr Rgb8 kInk{20, 20, 20};
constexpr Rgb8 kStarOn{255, 180, 0};
constexpr Rgb8 kStarOff{215, 215, 215};
constexpr Rgb8 kDealRed{220, 0, 0};
constexpr Rgb8 kWhite{255, 255, 255};
constexpr Rgb8 kLightGreen{110, 210, 110};

void draw_motif(Rgb8Image& img, const Rect& tile, const ImageStyle& style) {
    using namespace raster;
    fill_rect(img, tile.x, tile.y, tile.w, tile.h, style.background_color);
    const int cx = tile.x + tile.w / 2;
    const int cy = tile.y + tile.h / 2;
    const Rgb8 base = style.base_color;
    const Rgb8 light = blend(base, kWhite, 0.35);
    switch (style.shape_motif) {
    case ShapeMotif::phone:
        fill_rounded_rect(img, cx - 30, cy - 58, 60, 116, 10, base);
        fill_rect(img, cx - 24, cy - 48, 48, 92, light);
        fill_ellipse(img, cx, cy + 51, 3, 3, light);
        break;
    case ShapeMotif::monitor:
        fill_rect(img, cx - 60, cy - 48, 120, 74, base);
        fill_rect(img, cx - 54, cy - 42, 108, 62, light);
        fill_rect(img, cx - 6, cy + 26, 12, 18, base);
        fill_rect(img, cx - 28, cy + 44, 56, 6, base);
        break;
    case ShapeMotif::chair:
        fill_rounded_rect(img, cx - 30, cy - 60, 60, 62, 12, base);
        fill_rect(img, cx - 38, cy + 4, 76, 14, base);
        fill_rect(img, cx - 4, cy + 18, 8, 26, base);
        fill_rect(img, cx - 36, cy + 44, 72, 6, base);
        fill_ellipse(img, cx - 34, cy + 54, 4, 4, base);
        fill_ellipse(img, cx + 34, cy + 54, 4, 4, base);
        break;
    case ShapeMotif::backpack:
        fill_ellipse(img, cx, cy - 50, 18, 10, base);
        fill_ellipse(img, cx, cy - 50, 11, 5, style.background_color);
        fill_rounded_rect(img, cx - 40, cy - 44, 80, 102, 18, base);
        fill_rounded_rect(img, cx - 28, cy + 8, 56, 38, 8, light);
        break;
    case ShapeMotif::shoe:
        fill_polygon(img, {{cx - 56, cy + 10}, {cx - 44, cy - 26}, {cx - 8, cy - 30}, {cx + 20, cy - 6},
                           {cx + 56, cy + 4}, {cx + 58, cy + 22}, {cx - 56, cy + 22}},
                     base);
        fill_rect(img, cx - 58, cy + 22, 118, 8, light);
        break;
    }
}

std::string fit_text(std::string_view text, int scale, int max_width) {
    std::string s(text);
    while (!s.empty() && raster::text_extent(s, scale).first > max_width) s.pop_back();
    return s;
}

// Greedy word wrap at a fixed character budget per line.
std::vector<std::string> wrap(std::string_view text, std::size_t per_line, std::size_t max_lines) {
    std::vector<std::string> lines;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(' ', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string word(text.substr(pos, end - pos));
        if (!current.empty() && current.size() + 1 + word.size() > per_line) {
            lines.push_back(current);
            current.clear();
        }
        if (!current.empty()) current += ' ';
        current += word.substr(0, per_line);
        pos = end + 1;
    }
    if (!current.empty()) lines.push_back(current);
    if (lines.size() > max_lines) lines.resize(max_lines);
    return lines;
}

void draw_star(Rgb8Image& img, int x, int y, int size, double fill, Rgb8 on, Rgb8 off) {
    // Five-point star rasterised as a polygon, then the filled fraction is
    // painted column-wise over the "off" star.
    const double r_out = size / 2.0;
    const double r_in = r_out * 0.45;
    std::vector<std::pair<int, int>> pts;
    for (int k = 0; k < 10; ++k) {
        const double ang = -M_PI / 2 + k * M_PI / 5;
        const double r = (k % 2 == 0) ? r_out : r_in;
        pts.emplace_back(static_cast<int>(std::lround(x + r_out + r * std::cos(ang))),
                         static_cast<int>(std::lround(y + r_out + r * std::sin(ang))));
    }
    Rgb8Image mask(size + 1, size + 1, {0, 0, 0});
    std::vector<std::pair<int, int>> local;
    for (auto [px, py] : pts) local.emplace_back(px - x, py - y);
    raster::fill_polygon(mask, local, {1, 1, 1});
    const int cut = static_cast<int>(std::lround(fill * size));
    for (int yy = 0; yy <= size; ++yy) {
        for (int xx = 0; xx <= size; ++xx) {
            if (mask.at(xx, yy).r == 0 || !img.contains(x + xx, y + yy)) continue;
            img.set(x + xx, y + yy, xx < cut ? on : off);
        }
    }
}

std::string one_decimal(double v) {
    const long tenths = std::lround(v * 10.0);
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

} // namespace

Rendered render(const StimulusSpec& spec) {
    spec.validate();
    const int n = static_cast<int>(spec.products.size());
    Rendered out;
    out.layout = layout_for(n);
    out.image = Rgb8Image(out.layout.page_width, out.layout.page_height, kWhite);
    Rgb8Image& img = out.image;

    auto emit = [&](int product, const std::string& role, const std::string& text, int x, int y, int scale,
                    Rgb8 color, bool bold) {
        raster::draw_text(img, x, y, text, scale, color, bold);
        const auto [w, h] = raster::text_extent(text, scale, bold);
        out.text_boxes.push_back({product, role, text, {x, y, w, h}});
    };

    for (int i = 1; i <= n; ++i) {
        const ProductSpec& p = spec.products[static_cast<std::size_t>(i - 1)];
        const int row_top = (i - 1) * kRowHeight;
        raster::hline(img, 0, kPageWidth - 1, row_top, kRule);

        const Rect image_aoi = out.layout.find(i, AoiKind::image)->rect;
        const Rect desc_aoi = out.layout.find(i, AoiKind::description)->rect;
        const Rect price_aoi = out.layout.find(i, AoiKind::price)->rect;

        draw_motif(img, image_aoi, p.image_style);

        const int tx = desc_aoi.x + 8;
        emit(i, "title", fit_text(p.title, 2, desc_aoi.w - 16), tx, desc_aoi.y + 8, 2, kTitleBlue, false);
        int ty = desc_aoi.y + 34;
        for (const std::string& line : wrap(p.description, static_cast<std::size_t>((desc_aoi.w - 16) / 6), 3)) {
            emit(i, "description", line, tx, ty, 1, kBodyGrey, false);
            ty += 11;
        }
        const int star_y = desc_aoi.y + 84;
        for (int s = 0; s < 5; ++s) {
            const double fill = std::clamp(p.star_rating - s, 0.0, 1.0);
            draw_star(img, tx + s * 18, star_y, 16, fill, kStarOn, kStarOff);
        }
        emit(i, "reviews", one_decimal(p.star_rating) + " (" + std::to_string(p.review_count) + ")",
             tx + 5 * 18 + 6, star_y + 5, 1, kLightGrey, false);

        const int px = price_aoi.x + 8;
        emit(i, "price", format_price(p.price_cents), px, price_aoi.y + 16, 3, kInk, true);
        if (p.discount_tag) {
            const std::string text = fit_text(p.discount_tag->text, 2, price_aoi.w - 24);
            const auto [w, h] = raster::text_extent(text, 2, true);
            const int tag_y = price_aoi.y + 62;
            if (p.discount_tag->style == Magnitude::type_i) {
                raster::fill_rect(img, px, tag_y, w + 8, h + 8, kDealRed);
                emit(i, "tag", text, px + 4, tag_y + 4, 2, kWhite, true);
            } else {
                emit(i, "tag", text, px, tag_y + 4, 2, kLightGreen, false);
            }
        }
    }
    return out;
}

} // namespace listsal::stimulus
