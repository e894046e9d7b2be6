from django.urls import path
from . import views

urlpatterns = [
    path("health/", views.health_check, name="health"),
    path("api/fixtures/", views.api_fixtures),
    path("api/fixtures/<str:name>/", views.api_fixture_detail),
    path("api/fixtures/<str:name>/sweep/", views.api_sweep),
    path("api/factorize/", views.api_factorize),
    path("api/capacity/", views.api_capacity),
]
