#pragma once

// Synthetic product-list pages: catalogue sampling, controlled outlier
// injection, and a deterministic renderer that reports the AOI rectangles it
// used.

#include "listsal/image.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace listsal::stimulus {

inline constexpr int kProductsPerPage = 15;

enum class Magnitude { type_i, type_ii };
enum class OutlierFeature { price, discount_tag, image, star_rating };
enum class ShapeMotif { phone, monitor, chair, backpack, shoe };
enum class AoiKind { image, description, price };

std::string to_string(Magnitude m);
std::string to_string(OutlierFeature f);
std::string to_string(ShapeMotif s);
std::string to_string(AoiKind k);
Magnitude parse_magnitude(std::string_view s);
OutlierFeature parse_feature(std::string_view s);
ShapeMotif parse_motif(std::string_view s);
AoiKind parse_aoi_kind(std::string_view s);

/// AOI kind on which a given outlier feature is displayed.
AoiKind display_kind(OutlierFeature f);

struct ImageStyle {
    Rgb8 base_color;
    ShapeMotif shape_motif = ShapeMotif::phone;
    Rgb8 background_color{255, 255, 255};

    friend bool operator==(const ImageStyle&, const ImageStyle&) = default;
};

struct DiscountTag {
    Magnitude style = Magnitude::type_i;
    std::string text;

    friend bool operator==(const DiscountTag&, const DiscountTag&) = default;
};

struct ProductSpec {
    std::string title;
    std::string description;
    std::int64_t price_cents = 0;
    double star_rating = 5.0;
    int review_count = 0;
    std::optional<DiscountTag> discount_tag;
    ImageStyle image_style;

    void validate(const std::string& where = "product") const;
    friend bool operator==(const ProductSpec&, const ProductSpec&) = default;
};

struct OutlierSpec {
    OutlierFeature feature = OutlierFeature::price;
    int position = 1; // 1-based
    Magnitude magnitude = Magnitude::type_i;

    friend bool operator==(const OutlierSpec&, const OutlierSpec&) = default;
};

struct StimulusSpec {
    std::string query;
    std::vector<ProductSpec> products;
    std::optional<OutlierSpec> outlier;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument naming the offending field.
    void validate() const;
    friend bool operator==(const StimulusSpec&, const StimulusSpec&) = default;
};

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool contains(double px, double py) const { return px >= x && py >= y && px < x + w && py < y + h; }
    bool contains(const Rect& r) const {
        return r.x >= x && r.y >= y && r.x + r.w <= x + w && r.y + r.h <= y + h;
    }
    bool overlaps(const Rect& r) const {
        return x < r.x + r.w && r.x < x + w && y < r.y + r.h && r.y < y + h;
    }
    friend bool operator==(const Rect&, const Rect&) = default;
};

struct Aoi {
    int product = 1; // 1-based list position
    AoiKind kind = AoiKind::image;
    Rect rect;

    friend bool operator==(const Aoi&, const Aoi&) = default;
};

struct AoiLayout {
    int page_width = 0;
    int page_height = 0;
    std::vector<Aoi> aois;

    /// Bounds, pairwise non-overlap, and top-to-bottom product order.
    void validate() const;
    const Aoi* find(int product, AoiKind kind) const;
    int product_count() const;
    friend bool operator==(const AoiLayout&, const AoiLayout&) = default;
};

/// Queries with a bundled template: phones, monitors, chairs, backpacks, shoes.
std::vector<std::string> catalog_queries();

/// Outlier-free list drawn deterministically from the query's template.
std::vector<ProductSpec> sample_products(std::string_view query, int n, std::uint64_t seed);

/// Returns `products` with one product altered at `outlier.position`.
/// Magnitudes are measured against the other products, so re-injecting the
/// same outlier is a no-op.
std::vector<ProductSpec> inject_outlier(std::vector<ProductSpec> products, const OutlierSpec& outlier,
                                        std::uint64_t seed);

/// sample_products + optional inject_outlier, packaged as a spec.
StimulusSpec make_stimulus(std::string_view query, std::uint64_t seed,
                           std::optional<OutlierSpec> outlier);

inline constexpr int kPageWidth = 800;
inline constexpr int kRowHeight = 160;

AoiLayout layout_for(int product_count);

/// Bounding box of a piece of text drawn by the renderer.
struct TextBox {
    int product = 0;
    std::string role; // "title", "description", "reviews", "price", "tag"
    std::string text;
    Rect box;
};

struct Rendered {
    Rgb8Image image;
    AoiLayout layout;
    std::vector<TextBox> text_boxes;
};

Rendered render(const StimulusSpec& spec);

/// Price as shown on the page, e.g. 24999 -> "249,99".
std::string format_price(std::int64_t cents);

} // namespace listsal::stimulus
