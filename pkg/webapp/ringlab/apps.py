from django.apps import AppConfig


class RinglabConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "ringlab"
    verbose_name = "Ring circuit simulator"
