def execute_command(image):
    image_patch = ImagePatch(image)
    bag_patches = image_patch.find('trash bag')
    if len(bag_patches) == 0:
        return {'function': 'None', 'error': 'No trash bag found.'}
    bag = bag_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (bag.horizontal_center, bag.vertical_center), 'box': [bag.left, bag.lower, bag.right, bag.upper]}
