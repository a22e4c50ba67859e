def execute_command(image):
    image_patch = ImagePatch(image)
    wagon_patches = image_patch.find('wagon')
    if len(wagon_patches) == 0:
        return {'function': 'None', 'error': 'No wagon found.'}
    wagon = wagon_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (wagon.horizontal_center, wagon.vertical_center), 'box': [wagon.left, wagon.lower, wagon.right, wagon.upper]}
